#pragma once
// Test-only reference computations. Nothing here calls into the library.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

// Tanh-sinh quadrature on [a, b]; tolerates integrable endpoint singularities.
inline double tanh_sinh(const std::function<double(double)>& f, double a, double b, int levels = 7) {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    const double pi2 = std::numbers::pi / 2.0;
    double result = 0.0;
    for (int level = 0; level <= levels; ++level) {
        const double h = std::ldexp(1.0, -level);
        double sum = 0.0;
        for (int k = -int(6.0 / h); k <= int(6.0 / h); ++k) {
            if (level > 0 && k % 2 == 0) {
                continue; // points already counted at coarser levels
            }
            const double t = k * h;
            const double u = pi2 * std::sinh(t);
            const double w = pi2 * std::cosh(t) / (std::cosh(u) * std::cosh(u));
            const double x = std::tanh(u);
            // Distance to the nearest endpoint, computed without cancellation.
            const double gap = 1.0 / (std::exp(std::abs(u)) * std::cosh(u));
            if (gap <= 0.0 || w < 1e-300) {
                continue;
            }
            const double px = x < 0 ? a + half * gap : b - half * gap;
            if (!(px > a && px < b)) {
                continue;
            }
            sum += w * f(px);
        }
        result = level == 0 ? sum * h : 0.5 * result + sum * h;
    }
    return half * result;
}

inline double binomial_pmf(int c, int k, double p) {
    return std::exp(std::lgamma(c + 1.0) - std::lgamma(k + 1.0) - std::lgamma(c - k + 1.0) + k * std::log(p) +
                    (c - k) * std::log1p(-p));
}

// Exact E[collective coalition score per segment] for the +/-1 match score at
// p = 1/2 under the interleaving channel, by enumerating k and y.
inline double interleaving_collective_mean_half(int c) {
    double total = 0.0;
    for (int k = 0; k <= c; ++k) {
        const double w = binomial_pmf(c, k, 0.5);
        const double p_one = static_cast<double>(k) / c;
        const double score_if_one = k - (c - k);  // k matches, c-k mismatches
        const double score_if_zero = (c - k) - k;
        total += w * (p_one * score_if_one + (1.0 - p_one) * score_if_zero);
    }
    return total;
}

// Asymptotic two-sided Kolmogorov-Smirnov critical value at the 1% level.
inline double ks_critical_1pct(std::size_t n) { return 1.6276 / std::sqrt(static_cast<double>(n)); }

// sup |F_n - F| of a sample against a reference cdf.
inline double ks_distance(std::vector<double> sample, const std::function<double(double)>& cdf) {
    std::sort(sample.begin(), sample.end());
    const auto n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double f = cdf(sample[i]);
        d = std::max({d, (i + 1) / n - f, f - i / n});
    }
    return d;
}

// Least-squares slope of y against x.
inline double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const auto n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// Small independent generator for test-side randomness.
struct SplitMix {
    std::uint64_t state;
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

} // namespace oracle
