#pragma once
// Arcsine bias distribution with cutoff, and fixed-bias sources.
//
//   F_d(p) = (2 asin(sqrt p) - 2 asin(sqrt d)) / (pi - 4 asin(sqrt d)),  d <= p <= 1 - d
//
// Randomness enters only through caller-supplied uniform draws.

#include <variant>

namespace dtt {

class Cutoff {
public:
    // Throws ConfigError unless 0 <= delta < 1/2.
    explicit Cutoff(double delta);

    double value() const { return delta_; }

private:
    double delta_;
};

double arcsine_cdf(double p, Cutoff delta);

// Inverse transform: p = sin^2(a + u (pi/2 - 2a)), a = asin(sqrt delta).
double arcsine_sample(double u, Cutoff delta);

double arcsine_pdf(double p, Cutoff delta);

class BiasSampler {
public:
    struct Fixed {
        double p;
    };
    struct ArcsineCutoff {
        Cutoff delta;
    };

    static BiasSampler fixed(double p);
    static BiasSampler arcsine(Cutoff delta);

    bool is_fixed() const { return std::holds_alternative<Fixed>(variant_); }
    const std::variant<Fixed, ArcsineCutoff>& variant() const { return variant_; }

    // Fixed samplers ignore the draw.
    double next(double u) const;

private:
    explicit BiasSampler(std::variant<Fixed, ArcsineCutoff> v) : variant_(v) {}

    std::variant<Fixed, ArcsineCutoff> variant_;
};

inline double next_bias(const BiasSampler& sampler, double u) { return sampler.next(u); }

} // namespace dtt
