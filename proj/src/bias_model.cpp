#include "dtt/bias_model.hpp"

#include "dtt/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace dtt {

namespace {

// Support checks allow a few ulps of slack so that samples produced by the
// inverse transform at u = 0 or u = 1 are accepted back by the cdf.
constexpr double kSupportSlack = 1e-14;

void check_support(double p, double delta, const char* op) {
    if (!(p >= delta - kSupportSlack && p <= 1.0 - delta + kSupportSlack)) {
        throw std::domain_error(std::string(op) + ": p = " + std::to_string(p) +
                                " outside [delta, 1 - delta] for delta = " +
                                std::to_string(delta));
    }
}

double lower_angle(Cutoff delta) { return std::asin(std::sqrt(delta.value())); }

} // namespace

Cutoff::Cutoff(double delta) : delta_(delta) {
    if (!(delta >= 0.0 && delta < 0.5)) {
        throw ConfigError("cutoff delta must satisfy 0 <= delta < 1/2, got " + std::to_string(delta));
    }
}

double arcsine_cdf(double p, Cutoff delta) {
    check_support(p, delta.value(), "arcsine_cdf");
    const double a = lower_angle(delta);
    const double q = std::min(std::max(p, 0.0), 1.0);
    return (2.0 * std::asin(std::sqrt(q)) - 2.0 * a) / (std::numbers::pi - 4.0 * a);
}

double arcsine_sample(double u, Cutoff delta) {
    if (!(u >= 0.0 && u <= 1.0)) {
        throw std::domain_error("arcsine_sample: u = " + std::to_string(u) + " outside [0, 1]");
    }
    const double a = lower_angle(delta);
    const double s = std::sin(a + u * (std::numbers::pi / 2.0 - 2.0 * a));
    return s * s;
}

double arcsine_pdf(double p, Cutoff delta) {
    check_support(p, delta.value(), "arcsine_pdf");
    const double a = lower_angle(delta);
    return 1.0 / ((std::numbers::pi - 4.0 * a) * std::sqrt(p * (1.0 - p)));
}

BiasSampler BiasSampler::fixed(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw ConfigError("fixed bias must lie in (0, 1), got " + std::to_string(p));
    }
    return BiasSampler(Fixed{p});
}

BiasSampler BiasSampler::arcsine(Cutoff delta) { return BiasSampler(ArcsineCutoff{delta}); }

double BiasSampler::next(double u) const {
    if (const auto* f = std::get_if<Fixed>(&variant_)) {
        return f->p;
    }
    return arcsine_sample(u, std::get<ArcsineCutoff>(variant_).delta);
}

} // namespace dtt
