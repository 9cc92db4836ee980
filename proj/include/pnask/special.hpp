#pragma once

namespace pnask {

/// First-order Marcum Q function Q1(a, b) for a >= 0, b >= 0.
///
/// Evaluated as the Poisson mixture of central chi-squared survival
/// probabilities, summed outward from the mode of the mixing distribution so
/// no intermediate factor underflows. Absolute accuracy is better than 1e-10
/// for a, b <= 50 and degrades gracefully well beyond that range.
double marcum_q1(double a, double b);

/// CDF at t of the noncentral chi-squared distribution with two degrees of
/// freedom and noncentrality lambda: 1 - Q1(sqrt(lambda), sqrt(t)).
double noncentral_chi2_cdf(double t, double lambda);

/// Exponentially scaled modified Bessel function exp(-|w|) * I0(w).
double bessel_i0e(double w);

/// log(I0(w)) for w >= 0, stable for large arguments.
double log_bessel_i0(double w);

}  // namespace pnask
