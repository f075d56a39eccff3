#include "dtt/parameterization.hpp"

#include "dtt/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace dtt {

namespace {

// Lengths are ceilings of products of logs; shave a relative 1e-12 first so
// that values which are integers in exact arithmetic do not round up.
std::int64_t ceil_length(double x) {
    return static_cast<std::int64_t>(std::ceil(x * (1.0 - 1e-12)));
}

void check_cn(int c, int n) {
    if (c < 2 || c > n) {
        throw ConfigError("need 2 <= c <= n, got c = " + std::to_string(c) + ", n = " + std::to_string(n));
    }
}

void check_eps(double eps, const char* name) {
    if (!(eps > 0.0 && eps < 1.0)) {
        throw ConfigError(std::string(name) + " must lie in (0, 1)");
    }
}

} // namespace

std::string_view to_string(AttackClass a) {
    switch (a) {
        case AttackClass::Interleaving: return "interleaving";
        case AttackClass::All1: return "all1";
        case AttackClass::CoinFlip: return "coinflip";
        case AttackClass::Majority: return "majority";
        case AttackClass::Minority: return "minority";
        case AttackClass::Unknown: return "unknown";
    }
    return "?";
}

AttackClass attack_class_from_string(std::string_view name) {
    for (auto a : {AttackClass::Interleaving, AttackClass::All1, AttackClass::CoinFlip, AttackClass::Majority,
                   AttackClass::Minority, AttackClass::Unknown}) {
        if (to_string(a) == name) {
            return a;
        }
    }
    throw ConfigError("unknown attack class '" + std::string(name) + "'");
}

StaticParams classic_tardos(int c, int n, double eps1) {
    check_cn(c, n);
    check_eps(eps1, "eps1");
    const double log_term = std::log(static_cast<double>(n) / eps1);
    return {ceil_length(100.0 * c * c * log_term), 20.0 * c * log_term, 1.0 / (300.0 * c)};
}

Table1Row table1_row(AttackClass attack, BiasChoice bias) {
    constexpr double e = std::numbers::e;
    const bool small_o = bias == BiasChoice::Optimal;
    switch (attack) {
        case AttackClass::Interleaving:
        case AttackClass::Unknown: return {2.0, 2};
        case AttackClass::All1: return {small_o ? 2.0 : 2.0 * e * (e - 1.0) / (2.0 * e - 1.0), 1};
        case AttackClass::CoinFlip: return {small_o ? 4.0 : 2.0 * (e * e - 1.0), 1};
        case AttackClass::Majority: return {std::numbers::pi, 1};
        case AttackClass::Minority: return {small_o ? 2.0 : 2.0 * (e - 1.0), 1};
    }
    throw std::logic_error("unhandled attack class");
}

Table1Length table1_asymptotic(AttackClass attack, int c, int n, double safety_factor, BiasChoice bias) {
    check_cn(c, n);
    if (!(safety_factor >= 1.0)) {
        throw ConfigError("safety factor must be >= 1");
    }
    const auto row = table1_row(attack, bias);
    const double ell = safety_factor * row.coefficient * std::pow(static_cast<double>(c), row.c_power) *
                       std::log(static_cast<double>(n));

    std::optional<double> p;
    switch (attack) {
        case AttackClass::Interleaving:
        case AttackClass::Majority: p = 0.5; break;
        case AttackClass::Unknown: break;
        case AttackClass::All1:
        case AttackClass::CoinFlip:
        case AttackClass::Minority:
            if (bias == BiasChoice::OneOverC) {
                p = 1.0 / c;
            } else {
                if (c < 3) {
                    throw ConfigError("the o(1/c) bias 1/(c ln c) needs c >= 3");
                }
                p = 1.0 / (c * std::log(static_cast<double>(c)));
            }
            break;
    }
    return {std::max<std::int64_t>(1, ceil_length(ell)), p};
}

StaticLengthProvider::StaticLengthProvider(Variant v) : variant_(v) {
    if (const auto* e = std::get_if<Explicit>(&variant_)) {
        if (e->ell < 1 || !(e->Z > 0.0)) {
            throw ConfigError("explicit provider needs ell >= 1 and Z > 0");
        }
        static_cast<void>(Cutoff{e->delta});
    } else if (const auto* t = std::get_if<AsymptoticTable1>(&variant_)) {
        if (!(t->safety_factor >= 1.0) || !(t->Z > 0.0)) {
            throw ConfigError("table1 provider needs safety_factor >= 1 and Z > 0");
        }
        static_cast<void>(Cutoff{t->delta});
    }
}

StaticParams StaticLengthProvider::operator()(int c, int n, double eps1, double eps2) const {
    check_cn(c, n);
    check_eps(eps1, "eps1");
    check_eps(eps2, "eps2");
    if (const auto* e = std::get_if<Explicit>(&variant_)) {
        return {e->ell, e->Z, e->delta};
    }
    if (std::holds_alternative<ClassicTardos>(variant_)) {
        return classic_tardos(c, n, eps1);
    }
    const auto& t = std::get<AsymptoticTable1>(variant_);
    return {table1_asymptotic(t.attack, c, n, t.safety_factor, t.bias).ell, t.Z, t.delta};
}

SchemeParams dynamic_params(int c, int n, double eps1, double eps2, const StaticLengthProvider& provider) {
    check_eps(eps1, "eps1");
    check_eps(eps2, "eps2");
    const auto s = provider(c, n, 0.5 * eps1, 0.5 * eps2);
    SchemeParams out{s.ell + c, s.Z, Cutoff{s.delta}, c, n, eps1, eps2};
    out.validate();
    return out;
}

SchemeParams static_params(int c, int n, double eps1, double eps2, const StaticLengthProvider& provider) {
    const auto s = provider(c, n, eps1, eps2);
    SchemeParams out{s.ell, s.Z, Cutoff{s.delta}, c, n, eps1, eps2};
    out.validate();
    return out;
}

JumpProfile JumpProfile::from_response(std::vector<double> response) {
    if (response.size() < 2 || response.front() != 0.0 || response.back() != 1.0) {
        throw ConfigError("jump profile must satisfy response(0) = 0 and response(c) = 1");
    }
    double beta = 0.0;
    for (std::size_t k = 0; k + 1 < response.size(); ++k) {
        beta = std::max(beta, std::abs(response[k + 1] - response[k]));
    }
    return {std::move(response), beta};
}

JumpProfile JumpProfile::for_attack(const AttackStrategy& attack, int c) {
    if (c < 1) {
        throw ConfigError("jump profile needs c >= 1");
    }
    std::vector<double> response(static_cast<std::size_t>(c) + 1);
    for (int k = 0; k <= c; ++k) {
        response[static_cast<std::size_t>(k)] = attack.prob_one({k, c});
    }
    return from_response(std::move(response));
}

double jump_predictor(const JumpProfile& profile, int c, int n) {
    return 2.0 * c * std::log(static_cast<double>(n)) / profile.beta;
}

} // namespace dtt
