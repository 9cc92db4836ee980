#pragma once

#include <cstdint>
#include <vector>

#include "pnask/channel.hpp"
#include "pnask/modem.hpp"

namespace pnask {

/// One simulated-link experiment description. Trials are partitioned into
/// fixed-size blocks, each driven by a stream derived from (seed, block), so
/// results depend on the seed but never on the worker count.
struct SimConfig {
    int m = 4;
    int m_c = 2;
    double d = 0.5;
    ChannelModel channel = ChannelModel::awgn();
    double es_n0_db = 10.0;
    std::int64_t n_symbols = 100000;
    std::uint64_t seed = 1;
    bool displacement_enabled = false;
    int threads = 1;
};

struct SerEstimate {
    double ser_primary = 0.0;
    double ser_covert = 0.0;
    std::int64_t n = 0;
    std::int64_t errors_primary = 0;
    std::int64_t errors_covert = 0;
    double sigma_primary = 0.0;
    double sigma_covert = 0.0;
};

struct DetectabilityReport {
    std::vector<double> bin_edges;  // size bins + 1
    std::vector<double> densities;  // size bins, integrates to 1
    double ks_statistic = 0.0;
};

/// Modulates uniformly random symbol pairs, runs them through the channel,
/// genie-equalizes (divides by the true gain), demodulates, and counts
/// primary and covert symbol errors independently.
SerEstimate estimate_ser(const SimConfig& config);

/// Histogram of |equalized received symbol| plus the two-sample KS statistic
/// against a pure M-PSK stream under the same channel and noise, drawn from
/// an independent stream of the same seed.
DetectabilityReport amplitude_statistics(const SimConfig& config, int bins);

/// First n equalized received samples, for external scatter plotting.
std::vector<Sample> scatter_export(const SimConfig& config, std::int64_t n);

/// Two-sample Kolmogorov-Smirnov sup-distance between empirical CDFs.
/// Inputs need not be sorted; both must be non-empty.
double ks_two_sample(std::vector<double> a, std::vector<double> b);

}  // namespace pnask
