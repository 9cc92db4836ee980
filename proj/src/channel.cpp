#include "pnask/channel.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "pnask/special.hpp"

namespace pnask {

ChannelModel ChannelModel::awgn() {
    ChannelModel m;
    m.kind = ChannelKind::Awgn;
    return m;
}

ChannelModel ChannelModel::rayleigh(double sigma_h) {
    ChannelModel m;
    m.kind = ChannelKind::Rayleigh;
    m.sigma_h = sigma_h;
    validate(m);
    return m;
}

ChannelModel ChannelModel::rician(double k_factor, double sigma_h) {
    ChannelModel m;
    m.kind = ChannelKind::Rician;
    m.k_factor = k_factor;
    m.sigma_h = sigma_h;
    validate(m);
    return m;
}

ChannelModel ChannelModel::lognormal(double ln_mu, double ln_sigma) {
    ChannelModel m;
    m.kind = ChannelKind::LogNormal;
    m.ln_mu = ln_mu;
    m.ln_sigma = ln_sigma;
    validate(m);
    return m;
}

double ChannelModel::mean_squared_gain() const {
    switch (kind) {
        case ChannelKind::Awgn:
            return 1.0;
        case ChannelKind::Rayleigh:
        case ChannelKind::Rician:
            return 2.0 * sigma_h * sigma_h;
        case ChannelKind::LogNormal:
            return std::exp(2.0 * ln_mu + 2.0 * ln_sigma * ln_sigma);
    }
    throw std::logic_error("mean_squared_gain: unknown channel kind");
}

void validate(const ChannelModel& model) {
    switch (model.kind) {
        case ChannelKind::Awgn:
            return;
        case ChannelKind::Rayleigh:
            if (!(model.sigma_h > 0.0) || !std::isfinite(model.sigma_h)) {
                throw std::invalid_argument("ChannelModel: Rayleigh sigma_h must be positive");
            }
            return;
        case ChannelKind::Rician:
            if (!(model.sigma_h > 0.0) || !std::isfinite(model.sigma_h)) {
                throw std::invalid_argument("ChannelModel: Rician sigma_h must be positive");
            }
            if (!(model.k_factor >= 0.0) || !std::isfinite(model.k_factor)) {
                throw std::invalid_argument("ChannelModel: Rician K factor must be >= 0");
            }
            return;
        case ChannelKind::LogNormal:
            if (!std::isfinite(model.ln_mu)) {
                throw std::invalid_argument("ChannelModel: log-normal ln_mu must be finite");
            }
            if (!(model.ln_sigma > 0.0) || !std::isfinite(model.ln_sigma)) {
                throw std::invalid_argument("ChannelModel: log-normal ln_sigma must be positive");
            }
            return;
    }
    throw std::invalid_argument("ChannelModel: unknown channel kind");
}

NoiseSpec NoiseSpec::from_db(double db) {
    if (std::isnan(db) || db == -std::numeric_limits<double>::infinity()) {
        throw std::invalid_argument("NoiseSpec: Es/N0 must be a real value or +inf");
    }
    return NoiseSpec{db};
}

NoiseSpec NoiseSpec::noiseless() { return NoiseSpec{std::numeric_limits<double>::infinity()}; }

bool NoiseSpec::is_noiseless() const { return std::isinf(es_n0_db) && es_n0_db > 0.0; }

double NoiseSpec::es_n0_linear() const {
    if (is_noiseless()) return std::numeric_limits<double>::infinity();
    return std::pow(10.0, es_n0_db / 10.0);
}

double NoiseSpec::n0() const {
    if (is_noiseless()) return 0.0;
    return 1.0 / es_n0_linear();
}

double NoiseSpec::sigma_per_component() const { return std::sqrt(0.5 * n0()); }

Sample draw_gain(const ChannelModel& model, Rng& rng) {
    std::normal_distribution<double> unit(0.0, 1.0);
    switch (model.kind) {
        case ChannelKind::Awgn:
            return {1.0, 0.0};
        case ChannelKind::Rayleigh:
            return {model.sigma_h * unit(rng), model.sigma_h * unit(rng)};
        case ChannelKind::Rician: {
            const double omega = 2.0 * model.sigma_h * model.sigma_h;
            const double k = model.k_factor;
            const double nu = std::sqrt(k * omega / (k + 1.0));
            const double sc = std::sqrt(omega / (2.0 * (k + 1.0)));
            return {nu + sc * unit(rng), sc * unit(rng)};
        }
        case ChannelKind::LogNormal: {
            const double magnitude = std::exp(model.ln_mu + model.ln_sigma * unit(rng));
            std::uniform_real_distribution<double> angle(0.0, kTwoPi);
            const double phi = angle(rng);
            return {magnitude * std::cos(phi), magnitude * std::sin(phi)};
        }
    }
    throw std::logic_error("draw_gain: unknown channel kind");
}

Sample draw_noise(const NoiseSpec& noise, Rng& rng) {
    if (noise.is_noiseless()) return {0.0, 0.0};
    std::normal_distribution<double> component(0.0, noise.sigma_per_component());
    return {component(rng), component(rng)};
}

std::vector<Sample> apply_channel(const std::vector<Sample>& samples, const ChannelModel& model,
                                  const NoiseSpec& noise, Rng& rng, std::vector<Sample>* gains_out) {
    if (samples.empty()) {
        throw std::invalid_argument("apply_channel: empty input");
    }
    validate(model);
    std::vector<Sample> out;
    out.reserve(samples.size());
    if (gains_out) {
        gains_out->clear();
        gains_out->reserve(samples.size());
    }
    for (const Sample& x : samples) {
        const Sample h = draw_gain(model, rng);
        if (gains_out) gains_out->push_back(h);
        out.push_back(h * x + draw_noise(noise, rng));
    }
    return out;
}

SquaredGainDensity::SquaredGainDensity(const ChannelModel& model) : model_(model) {
    validate(model);
    if (!model.is_fading()) {
        throw std::invalid_argument("SquaredGainDensity: AWGN has no fading density");
    }
}

double SquaredGainDensity::pdf(double z) const {
    if (!(z >= 0.0)) return 0.0;
    switch (model_.kind) {
        case ChannelKind::Rayleigh: {
            const double mean = 2.0 * model_.sigma_h * model_.sigma_h;
            return std::exp(-z / mean) / mean;
        }
        case ChannelKind::Rician: {
            const double omega = 2.0 * model_.sigma_h * model_.sigma_h;
            const double k = model_.k_factor;
            const double w = 2.0 * std::sqrt(k * (k + 1.0) * z / omega);
            const double log_pdf =
                std::log((k + 1.0) / omega) - k - (k + 1.0) * z / omega + log_bessel_i0(w);
            return std::exp(log_pdf);
        }
        case ChannelKind::LogNormal: {
            if (z == 0.0) return 0.0;
            const double m = 2.0 * model_.ln_mu;
            const double s = 2.0 * model_.ln_sigma;
            const double u = (std::log(z) - m) / s;
            return std::exp(-0.5 * u * u) / (z * s * std::sqrt(kTwoPi));
        }
        default:
            return 0.0;
    }
}

double SquaredGainDensity::survival(double z) const {
    if (!(z > 0.0)) return 1.0;
    switch (model_.kind) {
        case ChannelKind::Rayleigh: {
            const double mean = 2.0 * model_.sigma_h * model_.sigma_h;
            return std::exp(-z / mean);
        }
        case ChannelKind::Rician: {
            const double omega = 2.0 * model_.sigma_h * model_.sigma_h;
            const double k = model_.k_factor;
            return marcum_q1(std::sqrt(2.0 * k), std::sqrt(2.0 * (k + 1.0) * z / omega));
        }
        case ChannelKind::LogNormal: {
            const double m = 2.0 * model_.ln_mu;
            const double s = 2.0 * model_.ln_sigma;
            return 0.5 * std::erfc((std::log(z) - m) / (s * std::sqrt(2.0)));
        }
        default:
            return 0.0;
    }
}

double SquaredGainDensity::mean() const { return model_.mean_squared_gain(); }

double SquaredGainDensity::quantile(double p) const {
    if (!(p >= 0.0 && p < 1.0)) {
        throw std::invalid_argument("SquaredGainDensity::quantile: require 0 <= p < 1");
    }
    if (p == 0.0) return 0.0;
    const double target = 1.0 - p;  // survival value to hit
    double hi = mean();
    if (hi <= 0.0) hi = 1.0;
    while (survival(hi) > target) {
        hi *= 2.0;
        if (hi > 1e300) throw std::runtime_error("SquaredGainDensity::quantile: bracket overflow");
    }
    double lo = 0.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (survival(mid) > target) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace pnask
