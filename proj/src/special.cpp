#include "pnask/special.hpp"

#include <cmath>
#include <stdexcept>

namespace pnask {

namespace {

/// Poisson pmf exp(-mean) * mean^k / k! computed through logs so that large
/// means do not underflow before the division by k!.
double poisson_pmf(double mean, long long k) {
    if (mean == 0.0) return k == 0 ? 1.0 : 0.0;
    const double lp = static_cast<double>(k) * std::log(mean) - mean - std::lgamma(static_cast<double>(k) + 1.0);
    return std::exp(lp);
}

/// P(Poisson(mean) <= k), summed from the side of the mode that converges.
double poisson_cdf(double mean, long long k) {
    if (k < 0) return 0.0;
    if (mean == 0.0) return 1.0;
    const long long mode = static_cast<long long>(std::floor(mean));
    if (k <= mode) {
        // Terms decay going down from k; accumulate until negligible.
        double term = poisson_pmf(mean, k);
        double sum = term;
        for (long long j = k; j > 0; --j) {
            term *= static_cast<double>(j) / mean;
            sum += term;
            if (term < sum * 1e-18) break;
        }
        return sum;
    }
    // Above the mode the upper tail converges; subtract it from one.
    double term = poisson_pmf(mean, k + 1);
    double tail = term;
    for (long long j = k + 1; term > tail * 1e-18; ++j) {
        term *= mean / static_cast<double>(j + 1);
        tail += term;
        if (j - k > 100000) break;
    }
    return 1.0 - tail;
}

}  // namespace

double marcum_q1(double a, double b) {
    if (std::isnan(a) || std::isnan(b) || a < 0.0 || b < 0.0) {
        throw std::domain_error("marcum_q1: require a >= 0 and b >= 0");
    }
    if (b == 0.0) return 1.0;
    const double x = 0.5 * a * a;
    const double y = 0.5 * b * b;
    if (x == 0.0) return std::exp(-y);

    // Q1(a, b) = sum_k Pois(k; x) * P(Pois(y) <= k). Walk k away from the
    // mixing mode in both directions, carrying the pmf of x and both the pmf
    // and CDF of y by one-step recurrences.
    const long long k0 = static_cast<long long>(std::floor(x));
    const double p0 = poisson_pmf(x, k0);
    const double t0 = poisson_pmf(y, k0);
    const double g0 = poisson_cdf(y, k0);

    double sum = p0 * g0;
    double mass = p0;  // accumulated Poisson(x) probability

    // Upward sweep: k = k0+1, k0+2, ...
    {
        double p = p0;
        double t = t0;
        double g = g0;
        for (long long k = k0 + 1; mass < 1.0 - 1e-16; ++k) {
            p *= x / static_cast<double>(k);
            t *= y / static_cast<double>(k);
            g += t;
            if (g > 1.0) g = 1.0;
            sum += p * g;
            mass += p;
            // Remaining contribution is bounded by the unaccumulated mass.
            if (1.0 - mass < 1e-16 || (p < 1e-18 && k > k0 + 4)) break;
            if (k - k0 > 2000000) break;
        }
    }

    // Downward sweep: k = k0-1, ..., 0.
    {
        double p = p0;
        double t = t0;
        double g = g0;
        for (long long k = k0; k > 0; --k) {
            p *= static_cast<double>(k) / x;
            g -= t;
            if (g < 0.0) g = 0.0;
            t *= static_cast<double>(k) / y;
            sum += p * g;
            mass += p;
            if (p < 1e-18 && k0 - k > 4) break;
        }
    }

    if (sum < 0.0) sum = 0.0;
    if (sum > 1.0) sum = 1.0;
    return sum;
}

double noncentral_chi2_cdf(double t, double lambda) {
    if (std::isnan(t) || std::isnan(lambda) || t < 0.0 || lambda < 0.0) {
        throw std::domain_error("noncentral_chi2_cdf: require t >= 0 and lambda >= 0");
    }
    return 1.0 - marcum_q1(std::sqrt(lambda), std::sqrt(t));
}

double bessel_i0e(double w) {
    const double z = std::fabs(w);
    if (z <= 50.0) {
        // Power series for I0, then scale. Terms peak near k = z/2 and the
        // unscaled sum stays far below overflow for z <= 50.
        double term = 1.0;
        double sum = 1.0;
        const double q = 0.25 * z * z;
        for (int k = 1; k < 400; ++k) {
            term *= q / (static_cast<double>(k) * static_cast<double>(k));
            sum += term;
            if (term < sum * 1e-18) break;
        }
        return sum * std::exp(-z);
    }
    // Asymptotic expansion: I0(z) ~ e^z / sqrt(2 pi z) * sum_k t_k with
    // t_0 = 1 and t_k = t_{k-1} * (2k-1)^2 / (8 k z).
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k <= 12; ++k) {
        const double odd = 2.0 * k - 1.0;
        term *= odd * odd / (8.0 * static_cast<double>(k) * z);
        sum += term;
        if (term < sum * 1e-17) break;
    }
    return sum / std::sqrt(2.0 * 3.141592653589793238462643383279502884 * z);
}

double log_bessel_i0(double w) {
    if (std::isnan(w) || w < 0.0) {
        throw std::domain_error("log_bessel_i0: require w >= 0");
    }
    return w + std::log(bessel_i0e(w));
}

}  // namespace pnask
