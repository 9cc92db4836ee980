#include "pnask/analytic.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "pnask/quadrature.hpp"

namespace pnask {

namespace {

void require_positive_snr(double value, const char* where) {
    if (std::isnan(value) || value <= 0.0) {
        throw std::invalid_argument(std::string(where) + ": SNR must be positive");
    }
}

}  // namespace

double covert_ser_awgn(double es_n0, const CovertCodingMap& map) {
    require_positive_snr(es_n0, "covert_ser_awgn");
    const int mc = map.covert_order;
    if (mc == 1) return 0.0;
    if (std::isinf(es_n0)) return 0.0;

    // All Marcum arguments share the factor sqrt(2 Es/N0); with Es = 1 the
    // level and threshold radii scale it directly.
    const double c = std::sqrt(2.0 * es_n0);
    const auto& k = map.levels;
    const auto& tau = map.thresholds;

    double sum = 1.0 - marcum_q1(c * k.front(), c * tau.front());
    sum += marcum_q1(c * k.back(), c * tau.back());
    for (int i = 2; i <= mc - 1; ++i) {
        const double a = c * k[i - 1];
        sum += 1.0 - marcum_q1(a, c * tau[i - 1]) + marcum_q1(a, c * tau[i - 2]);
    }
    double p = sum / static_cast<double>(mc);
    if (p < 0.0) p = 0.0;
    if (p > 1.0) p = 1.0;
    return p;
}

double mpsk_ser_awgn(double gamma, int m) {
    if (!is_power_of_two(m) || m < 2) {
        throw std::invalid_argument("mpsk_ser_awgn: order must be a power of two >= 2");
    }
    require_positive_snr(gamma, "mpsk_ser_awgn");
    if (std::isinf(gamma)) return 0.0;

    if (m == 2) {
        return 0.5 * std::erfc(std::sqrt(gamma));
    }

    // Exact finite-integral form: (1/pi) * int_0^{pi (m-1)/m}
    //   exp(-gamma sin^2(pi/m) / sin^2(theta)) dtheta.
    const double s = std::sin(kPi / m);
    const double coeff = gamma * s * s;
    const auto integrand = [coeff](double theta) {
        const double st = std::sin(theta);
        if (st <= 0.0) return 0.0;
        return std::exp(-coeff / (st * st));
    };
    QuadratureOptions options;
    options.abs_tol = 1e-13;
    options.rel_tol = 1e-12;
    options.max_intervals = 4000;
    const double upper = kPi * (m - 1) / m;
    const double value = integrate_adaptive(integrand, 0.0, upper, options).value / kPi;
    if (value < 0.0) return 0.0;
    if (value > 1.0) return 1.0;
    return value;
}

double primary_ser_awgn(double es_n0, int m, const CovertCodingMap& map) {
    require_positive_snr(es_n0, "primary_ser_awgn");
    if (std::isinf(es_n0)) return 0.0;
    double sum = 0.0;
    for (double level : map.levels) {
        sum += mpsk_ser_awgn(level * level * es_n0, m);
    }
    return sum / static_cast<double>(map.covert_order);
}

double ser_fading(double es_n0, const ChannelModel& model,
                  const std::function<double(double)>& ser_awgn) {
    require_positive_snr(es_n0, "ser_fading");
    if (!model.is_fading()) {
        throw std::invalid_argument("ser_fading: model must be a fading kind");
    }
    const SquaredGainDensity density(model);

    // Truncate where the tail mass of the density falls below 1e-9, and seed
    // the subdivision at density quantiles so concentrated distributions
    // (e.g. large-K Rician) are resolved from the start.
    const double upper = density.quantile(1.0 - 1e-9);
    std::vector<double> breakpoints{0.0};
    for (double p : {0.01, 0.10, 0.25, 0.50, 0.75, 0.90, 0.99, 0.9999}) {
        const double q = density.quantile(p);
        if (q > breakpoints.back() && q < upper) breakpoints.push_back(q);
    }
    breakpoints.push_back(upper);

    const auto integrand = [&](double z) { return ser_awgn(es_n0 * z) * density.pdf(z); };
    QuadratureOptions options;
    options.abs_tol = 1e-12;
    options.rel_tol = 1e-6;
    options.max_intervals = 4000;
    double value = integrate_adaptive(integrand, breakpoints, options).value;
    if (value < 0.0) value = 0.0;
    if (value > 1.0) value = 1.0;
    return value;
}

double covert_ser(double es_n0, const CovertCodingMap& map, const ChannelModel& model) {
    if (!model.is_fading()) return covert_ser_awgn(es_n0, map);
    if (map.covert_order == 1) return 0.0;
    return ser_fading(es_n0, model, [&map](double g) { return covert_ser_awgn(g, map); });
}

double primary_ser(double es_n0, int m, const CovertCodingMap& map, const ChannelModel& model) {
    if (!model.is_fading()) return primary_ser_awgn(es_n0, m, map);
    return ser_fading(es_n0, model,
                      [&map, m](double g) { return primary_ser_awgn(g, m, map); });
}

double energy_per_symbol(double es, const CovertCodingMap& map) {
    double sum = 0.0;
    for (double level : map.levels) sum += level * level;
    return es * sum / static_cast<double>(map.covert_order);
}

double rate_from_ser(double ser, double t_s) {
    if (!(t_s > 0.0)) {
        throw std::invalid_argument("rate_from_ser: symbol period must be positive");
    }
    if (std::isnan(ser) || ser < 0.0 || ser > 1.0) {
        throw std::invalid_argument("rate_from_ser: SER must lie in [0, 1]");
    }
    return (1.0 - ser) / t_s;
}

RatePair symbol_goodput(double es_n0, int m, const CovertCodingMap& map, double t_s,
                        const ChannelModel& model) {
    if (!(t_s > 0.0)) {
        throw std::invalid_argument("symbol_goodput: symbol period must be positive");
    }
    RatePair rates;
    rates.r_p = rate_from_ser(primary_ser(es_n0, m, map, model), t_s);
    rates.r_c = rate_from_ser(covert_ser(es_n0, map, model), t_s);
    return rates;
}

}  // namespace pnask
