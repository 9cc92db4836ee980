#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "oracle_helpers.hpp"
#include "pnask/special.hpp"
#include "pnask/types.hpp"

using namespace pnask;

TEST_CASE("marcum q boundary identities") {
    for (int i = 0; i < 100; ++i) {
        const double a = 50.0 * i / 99.0;
        CHECK(std::abs(marcum_q1(a, 0.0) - 1.0) <= 1e-12);
    }
    for (int i = 0; i < 100; ++i) {
        const double b = 10.0 * i / 99.0;
        CHECK(std::abs(marcum_q1(0.0, b) - std::exp(-0.5 * b * b)) <= 1e-12);
    }
}

TEST_CASE("marcum q agrees with an independent quadrature oracle") {
    std::mt19937_64 rng(20240915);
    std::uniform_real_distribution<double> unit(0.0, 10.0);
    for (int trial = 0; trial < 200; ++trial) {
        const double a = unit(rng);
        const double b = unit(rng);
        const double want = oracle::marcum_q1(a, b);
        const double got = marcum_q1(a, b);
        CAPTURE(a);
        CAPTURE(b);
        CHECK(std::abs(got - want) <= 1e-8);
    }
}

TEST_CASE("marcum q is monotone and bounded") {
    std::vector<double> grid;
    for (int i = 0; i <= 60; ++i) grid.push_back(12.0 * i / 60.0);
    for (double b : {0.5, 2.0, 5.0, 9.0}) {
        double prev = -1.0;
        for (double a : grid) {
            const double q = marcum_q1(a, b);
            CHECK(q >= 0.0);
            CHECK(q <= 1.0);
            CHECK(q >= prev - 1e-13);  // non-decreasing in a
            prev = q;
        }
    }
    for (double a : {0.0, 1.0, 3.0, 8.0}) {
        double prev = 2.0;
        for (double b : grid) {
            const double q = marcum_q1(a, b);
            CHECK(q <= prev + 1e-13);  // non-increasing in b
            prev = q;
        }
    }
}

TEST_CASE("marcum q rejects invalid arguments") {
    CHECK_THROWS_AS(marcum_q1(-0.1, 1.0), std::domain_error);
    CHECK_THROWS_AS(marcum_q1(1.0, -0.1), std::domain_error);
    CHECK_THROWS_AS(marcum_q1(std::numeric_limits<double>::quiet_NaN(), 1.0), std::domain_error);
    CHECK_THROWS_AS(marcum_q1(1.0, std::numeric_limits<double>::quiet_NaN()), std::domain_error);
}

TEST_CASE("noncentral chi squared cdf") {
    CHECK(noncentral_chi2_cdf(0.0, 3.0) == doctest::Approx(0.0).epsilon(1e-14));
    // Central case collapses to the two-dof exponential law.
    for (double t : {0.1, 1.0, 4.0, 9.0}) {
        CHECK(noncentral_chi2_cdf(t, 0.0) ==
              doctest::Approx(1.0 - std::exp(-0.5 * t)).epsilon(1e-12));
    }
    double prev = -1.0;
    for (int i = 0; i <= 80; ++i) {
        const double t = 20.0 * i / 80.0;
        const double c = noncentral_chi2_cdf(t, 2.0);
        CHECK(c >= prev - 1e-13);
        prev = c;
    }

    // Monte Carlo oracle: (Z1 + sqrt(lambda))^2 + Z2^2 with standard normals.
    const double t = 4.0;
    const double lambda = 2.0;
    std::mt19937_64 rng(77);
    std::normal_distribution<double> normal(0.0, 1.0);
    const int n = 1000000;
    long hits = 0;
    for (int i = 0; i < n; ++i) {
        const double z1 = normal(rng) + std::sqrt(lambda);
        const double z2 = normal(rng);
        if (z1 * z1 + z2 * z2 <= t) ++hits;
    }
    const double p_hat = static_cast<double>(hits) / n;
    const double p = noncentral_chi2_cdf(t, lambda);
    const double sigma = std::sqrt(p * (1.0 - p) / n);
    CHECK(std::abs(p - p_hat) <= 3.0 * sigma);
}

TEST_CASE("scaled bessel i0 against the integral definition") {
    CHECK(bessel_i0e(0.0) == doctest::Approx(1.0).epsilon(1e-14));
    for (double w : {0.1, 1.0, 5.0, 10.0, 50.0, 200.0}) {
        const double want = oracle::bessel_i0e(w);
        CHECK(bessel_i0e(w) == doctest::Approx(want).epsilon(1e-10));
    }
    // exp(-w) grows slower than I0 shrinks the scaled value: i0e decreases.
    double prev = 2.0;
    for (double w : {0.0, 0.5, 1.0, 2.0, 5.0, 20.0, 100.0, 400.0}) {
        const double v = bessel_i0e(w);
        CHECK(v > 0.0);
        CHECK(v < prev);
        prev = v;
    }
}

TEST_CASE("log bessel i0 is stable for large arguments") {
    for (double w : {0.1, 1.0, 5.0, 10.0, 50.0, 200.0}) {
        const double want = w + std::log(oracle::bessel_i0e(w));
        CHECK(log_bessel_i0(w) == doctest::Approx(want).epsilon(1e-10));
    }
    // Far beyond exp overflow of the unscaled I0.
    const double w = 700.0;
    const double want = w + std::log(oracle::bessel_i0e(w));
    CHECK(std::isfinite(log_bessel_i0(w)));
    CHECK(log_bessel_i0(w) == doctest::Approx(want).epsilon(1e-9));
    CHECK(log_bessel_i0(0.0) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK_THROWS_AS(log_bessel_i0(-1.0), std::domain_error);
}
