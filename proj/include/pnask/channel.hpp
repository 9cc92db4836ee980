#pragma once

#include <vector>

#include "pnask/types.hpp"

namespace pnask {

enum class ChannelKind { Awgn, Rayleigh, Rician, LogNormal };

/// Tagged channel description. Only the parameters of the active kind are
/// meaningful; the factory helpers below set the others to their defaults.
struct ChannelModel {
    ChannelKind kind = ChannelKind::Awgn;
    /// Per-component standard deviation of the complex gain, so a Rayleigh
    /// channel with sigma_h has E[|h|^2] = 2 sigma_h^2.
    double sigma_h = 1.0;
    /// Rician K factor (linear, >= 0). K = 0 degenerates to Rayleigh.
    double k_factor = 0.0;
    /// Log-normal parameters of |h|: |h| = exp(X), X ~ N(ln_mu, ln_sigma^2).
    double ln_mu = 0.0;
    double ln_sigma = 0.5;

    static ChannelModel awgn();
    static ChannelModel rayleigh(double sigma_h = 1.0);
    static ChannelModel rician(double k_factor, double sigma_h = 1.0);
    static ChannelModel lognormal(double ln_mu = 0.0, double ln_sigma = 0.5);

    bool is_fading() const { return kind != ChannelKind::Awgn; }
    /// E[|h|^2] of the model (1 for AWGN).
    double mean_squared_gain() const;
};

/// Throws std::invalid_argument when a parameter is out of range for the
/// model's kind.
void validate(const ChannelModel& model);

/// Symbol-energy to noise-density ratio. +infinity selects the degenerate
/// noise-free channel; NaN and -infinity are rejected.
struct NoiseSpec {
    double es_n0_db = 0.0;

    static NoiseSpec from_db(double db);
    static NoiseSpec noiseless();

    bool is_noiseless() const;
    double es_n0_linear() const;
    /// N0 = 1 / (Es/N0) with Es normalized to 1.
    double n0() const;
    /// Per-component noise standard deviation: N0 = 2 sigma_N^2.
    double sigma_per_component() const;
};

/// One complex channel gain drawn from the model (h = 1 for AWGN).
Sample draw_gain(const ChannelModel& model, Rng& rng);

/// One circularly symmetric complex Gaussian noise sample with
/// E[|n|^2] = N0.
Sample draw_noise(const NoiseSpec& noise, Rng& rng);

/// y = h * x + n per sample, h drawn independently per symbol. When gains_out
/// is non-null it receives the per-symbol gains (for genie equalization).
std::vector<Sample> apply_channel(const std::vector<Sample>& samples, const ChannelModel& model,
                                  const NoiseSpec& noise, Rng& rng,
                                  std::vector<Sample>* gains_out = nullptr);

/// Distribution of z = |h|^2 for a fading model: density, survival function,
/// moments, and quantiles. Construction from an AWGN model throws.
class SquaredGainDensity {
  public:
    explicit SquaredGainDensity(const ChannelModel& model);

    double pdf(double z) const;
    /// P(Z > z).
    double survival(double z) const;
    double mean() const;
    /// z with P(Z <= z) = p, found by bracketing the survival function.
    double quantile(double p) const;

  private:
    ChannelModel model_;
};

}  // namespace pnask
