#pragma once

#include <functional>
#include <vector>

namespace pnask {

struct QuadratureOptions {
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
    int max_intervals = 2000;
};

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    int intervals = 0;
};

/// Adaptive Gauss-Kronrod (G7,K15) integration of f over [a, b] with
/// bisection of the interval carrying the largest error estimate.
/// Throws std::runtime_error when the requested tolerance cannot be reached
/// within max_intervals; the failure is never silently truncated.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    const QuadratureOptions& options = {});

/// Same, but the initial subdivision is given by breakpoints (ascending,
/// spanning [front, back]). Useful when the integrand is known to be
/// concentrated in a small part of the range.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f,
                                    const std::vector<double>& breakpoints,
                                    const QuadratureOptions& options = {});

}  // namespace pnask
