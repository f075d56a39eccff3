#include "doctest.h"
#include "oracles.hpp"

#include "dtt/bias_model.hpp"
#include "dtt/errors.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

using namespace dtt;

namespace {
const std::vector<double> kCutoffs = {0.0, 1.0 / 350.0, 1.0 / 300.0, 0.01, 0.1};
}

TEST_CASE("arcsine cdf at the support endpoints and the centre") {
    for (double d : kCutoffs) {
        CHECK(arcsine_cdf(d, Cutoff{d}) == doctest::Approx(0.0).epsilon(1e-15));
        CHECK(arcsine_cdf(1.0 - d, Cutoff{d}) == doctest::Approx(1.0).epsilon(1e-14));
    }
    CHECK(arcsine_cdf(0.5, Cutoff{0.0}) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("arcsine cdf is nondecreasing") {
    const Cutoff d{0.01};
    double prev = -1.0;
    for (int i = 0; i <= 1000; ++i) {
        const double p = 0.01 + 0.98 * i / 1000.0;
        const double f = arcsine_cdf(p, d);
        CHECK(f >= prev);
        prev = f;
    }
}

TEST_CASE("arcsine sample endpoints and the analytic median") {
    CHECK(arcsine_sample(0.0, Cutoff{0.01}) == doctest::Approx(0.01).epsilon(1e-14));
    CHECK(arcsine_sample(1.0, Cutoff{0.01}) == doctest::Approx(0.99).epsilon(1e-14));
    // F_0(p) = 1/2 <=> asin(sqrt p) = pi/4 <=> p = 1/2.
    CHECK(arcsine_sample(0.5, Cutoff{0.0}) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("cdf inverts the sampler on a grid of 1000 draws") {
    for (double d : kCutoffs) {
        double worst = 0.0;
        for (int i = 0; i <= 1000; ++i) {
            const double u = i / 1000.0;
            worst = std::max(worst, std::abs(arcsine_cdf(arcsine_sample(u, Cutoff{d}), Cutoff{d}) - u));
        }
        CHECK(worst <= 1e-9);
    }
}

TEST_CASE("samples land inside the support without clamping") {
    oracle::SplitMix rng{7};
    for (double d : kCutoffs) {
        for (int i = 0; i < 100000; ++i) {
            const double p = arcsine_sample(rng.uniform(), Cutoff{d});
            REQUIRE(p >= d);
            REQUIRE(p <= 1.0 - d);
        }
    }
}

TEST_CASE("empirical cdf of 1e5 samples passes KS at 1%") {
    for (double d : {0.0, 1.0 / 350.0, 0.01}) {
        oracle::SplitMix rng{20240601};
        std::vector<double> sample(100000);
        for (auto& s : sample) {
            s = arcsine_sample(rng.uniform(), Cutoff{d});
        }
        const double dist = oracle::ks_distance(sample, [d](double p) { return arcsine_cdf(p, Cutoff{d}); });
        CHECK(dist < oracle::ks_critical_1pct(sample.size()));
    }
}

TEST_CASE("arcsine pdf values") {
    CHECK(arcsine_pdf(0.5, Cutoff{0.0}) == doctest::Approx(2.0 / std::numbers::pi).epsilon(1e-15));

    const double expected = 1.0 / ((std::numbers::pi - 4.0 * std::asin(0.5)) * std::sqrt(0.25 * 0.75));
    CHECK(arcsine_pdf(0.25, Cutoff{0.25}) == doctest::Approx(expected).epsilon(1e-14));

    // One-sided finite difference of the cdf at the lower endpoint.
    const double h = 1e-7;
    const double fd = (arcsine_cdf(0.25 + h, Cutoff{0.25}) - arcsine_cdf(0.25, Cutoff{0.25})) / h;
    CHECK(fd == doctest::Approx(expected).epsilon(1e-5));
}

TEST_CASE("pdf matches central differences of the cdf in the interior") {
    const Cutoff d{1.0 / 350.0};
    for (double p : {0.01, 0.1, 0.3, 0.5, 0.77, 0.95}) {
        const double h = 1e-6;
        const double fd = (arcsine_cdf(p + h, d) - arcsine_cdf(p - h, d)) / (2 * h);
        CHECK(arcsine_pdf(p, d) == doctest::Approx(fd).epsilon(1e-7));
    }
}

TEST_CASE("pdf integrates to one") {
    for (double d : {0.0, 1.0 / 350.0, 0.01, 0.1}) {
        // The density is symmetric; integrating up to 1/2 keeps the singular
        // endpoint at 0, where doubles resolve p itself.
        const double integral =
            2.0 * oracle::tanh_sinh([d](double p) { return arcsine_pdf(p, Cutoff{d}); }, d, 0.5);
        INFO("delta = " << d);
        CHECK(std::abs(integral - 1.0) <= 1e-9);
    }
}

TEST_CASE("pdf is symmetric about one half") {
    const Cutoff d{0.01};
    for (int i = 0; i <= 100; ++i) {
        const double p = 0.01 + 0.98 * i / 100.0;
        CHECK(arcsine_pdf(p, d) == doctest::Approx(arcsine_pdf(1.0 - p, d)).epsilon(1e-12));
    }
}

TEST_CASE("domain errors") {
    CHECK_THROWS_AS(arcsine_cdf(0.005, Cutoff{0.01}), std::domain_error);
    CHECK_THROWS_AS(arcsine_cdf(0.999, Cutoff{0.01}), std::domain_error);
    CHECK_THROWS_AS(arcsine_pdf(0.1, Cutoff{0.25}), std::domain_error);
    CHECK_THROWS_AS(arcsine_sample(-0.1, Cutoff{0.01}), std::domain_error);
    CHECK_THROWS_AS(arcsine_sample(1.5, Cutoff{0.01}), std::domain_error);
    CHECK_THROWS_AS(Cutoff{0.5}, ConfigError);
    CHECK_THROWS_AS(Cutoff{-0.1}, ConfigError);
    CHECK_THROWS_AS(BiasSampler::fixed(0.0), ConfigError);
    CHECK_THROWS_AS(BiasSampler::fixed(1.0), ConfigError);
}

TEST_CASE("next_bias dispatch") {
    CHECK(next_bias(BiasSampler::fixed(0.1), 0.77) == 0.1);
    CHECK(next_bias(BiasSampler::arcsine(Cutoff{0.0}), 0.5) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(next_bias(BiasSampler::arcsine(Cutoff{1.0 / 350.0}), 0.0) == doctest::Approx(1.0 / 350.0).epsilon(1e-13));
}
