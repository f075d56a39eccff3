#pragma once
// Scheme parameter providers: explicit values, the classic Tardos constants,
// the leading-order lengths against known attacks, the static-to-dynamic
// length reduction and the biggest-jump length predictor.

#include "dtt/attack_strategies.hpp"
#include "dtt/tracing_engine.hpp"

#include <cstdint>
#include <optional>
#include <string_view>
#include <variant>
#include <vector>

namespace dtt {

enum class AttackClass { Interleaving, All1, CoinFlip, Majority, Minority, Unknown };
enum class BiasChoice { Optimal, OneOverC };

std::string_view to_string(AttackClass a);
AttackClass attack_class_from_string(std::string_view name);

struct StaticParams {
    std::int64_t ell;
    double Z;
    double delta;
};

// ell = ceil(100 c^2 ln(n/eps1)), Z = 20 c ln(n/eps1), delta = 1/(300 c).
StaticParams classic_tardos(int c, int n, double eps1);

struct Table1Length {
    std::int64_t ell;
    std::optional<double> p; // empty: arcsine sampling (unknown attack)
};

// Leading coefficient and power of c in ell ~ coefficient * c^power * ln n.
struct Table1Row {
    double coefficient;
    int c_power;
};

Table1Row table1_row(AttackClass attack, BiasChoice bias);

// The small-o bias o(1/c) is realised as 1/(c ln c), which needs c >= 3.
Table1Length table1_asymptotic(AttackClass attack, int c, int n, double safety_factor = 2.0,
                               BiasChoice bias = BiasChoice::OneOverC);

class StaticLengthProvider {
public:
    struct Explicit {
        std::int64_t ell;
        double Z;
        double delta;
    };
    struct ClassicTardos {};
    struct AsymptoticTable1 {
        AttackClass attack;
        double safety_factor = 2.0;
        BiasChoice bias = BiasChoice::OneOverC;
        // Leading-order lengths say nothing about the threshold, so it is
        // supplied (usually after calibration).
        double Z = 1.0;
        double delta = 0.0;
    };
    using Variant = std::variant<Explicit, ClassicTardos, AsymptoticTable1>;

    // Throws ConfigError when the variant's own invariants fail.
    explicit StaticLengthProvider(Variant v);

    const Variant& variant() const { return variant_; }

    StaticParams operator()(int c, int n, double eps1, double eps2) const;

private:
    Variant variant_;
};

// ell_dynamic(c, n, eps1, eps2) = ell_static(c, n, eps1/2, eps2/2) + c.
SchemeParams dynamic_params(int c, int n, double eps1, double eps2, const StaticLengthProvider& provider);

// Same provider without the reduction, for static tracing.
SchemeParams static_params(int c, int n, double eps1, double eps2, const StaticLengthProvider& provider);

struct JumpProfile {
    std::vector<double> response; // P(y = 1 | k), k = 0..c
    double beta;                  // largest single-step jump

    // Throws ConfigError unless response(0) = 0, response(c) = 1 and c >= 1.
    static JumpProfile from_response(std::vector<double> response);
    static JumpProfile for_attack(const AttackStrategy& attack, int c);
};

// 2 c ln(n) / beta.
double jump_predictor(const JumpProfile& profile, int c, int n);

} // namespace dtt
