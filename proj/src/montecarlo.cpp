#include "pnask/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>
#include <stdexcept>
#include <thread>

namespace pnask {

namespace {

constexpr std::int64_t kBlockSize = 65536;
// Reference (pure M-PSK) streams live far away from the data streams in the
// stream-index space so the two sequences never share a generator.
constexpr std::uint64_t kReferenceStreamBase = 0x8000000000000000ULL;

struct BlockCounts {
    std::int64_t primary_errors = 0;
    std::int64_t covert_errors = 0;
};

void validate_config(const SimConfig& config) {
    if (config.n_symbols < 1) {
        throw std::invalid_argument("SimConfig: n_symbols must be >= 1");
    }
    validate(config.channel);
    // Feasibility of (m, m_c, d) is enforced by build_coding_map and
    // psk_modulate; surface those errors early.
    build_coding_map(config.m_c, config.d);
    psk_modulate(0, config.m);
    NoiseSpec::from_db(config.es_n0_db);
}

/// Runs `count` trials of block `block`. When `pure_reference` is set the
/// covert channel is disabled (single unit level) and the stream index is
/// offset, producing the independent M-PSK comparison stream. Outputs are
/// optional so SER counting does not pay for sample storage.
void simulate_block(const SimConfig& config, const CovertCodingMap& map, std::uint64_t block,
                    std::int64_t count, bool pure_reference, BlockCounts* counts,
                    std::vector<Sample>* equalized_out) {
    Rng rng = make_stream_rng(config.seed, pure_reference ? kReferenceStreamBase + block : block);
    std::uniform_int_distribution<int> primary_draw(0, config.m - 1);
    std::uniform_int_distribution<int> covert_draw(0, map.covert_order - 1);
    const NoiseSpec noise = NoiseSpec::from_db(config.es_n0_db);

    for (std::int64_t t = 0; t < count; ++t) {
        SymbolPair tx;
        tx.primary_index = primary_draw(rng);
        tx.covert_index = covert_draw(rng);
        Sample x = pnask_modulate(tx, config.m, map);
        if (config.displacement_enabled) {
            x = apply_displacement(x, tx.covert_index, map, rng);
        }
        const Sample h = draw_gain(config.channel, rng);
        const Sample y = h * x + draw_noise(noise, rng);
        const Sample equalized = y / h;
        if (equalized_out) equalized_out->push_back(equalized);
        if (counts) {
            const SymbolPair rx = pnask_demodulate(equalized, config.m, map);
            if (rx.primary_index != tx.primary_index) ++counts->primary_errors;
            if (rx.covert_index != tx.covert_index) ++counts->covert_errors;
        }
    }
}

std::int64_t block_count(std::int64_t n) { return (n + kBlockSize - 1) / kBlockSize; }

std::int64_t trials_in_block(std::int64_t n, std::int64_t block) {
    const std::int64_t start = block * kBlockSize;
    return std::min(kBlockSize, n - start);
}

std::vector<double> amplitudes_of(const SimConfig& config, bool pure_reference) {
    CovertCodingMap map =
        pure_reference ? build_coding_map(1) : build_coding_map(config.m_c, config.d);
    SimConfig local = config;
    if (pure_reference) {
        local.m_c = 1;
        local.d = 0.0;
        local.displacement_enabled = false;
    }
    std::vector<double> amplitudes;
    amplitudes.reserve(static_cast<std::size_t>(config.n_symbols));
    const std::int64_t blocks = block_count(config.n_symbols);
    std::vector<Sample> buffer;
    for (std::int64_t b = 0; b < blocks; ++b) {
        buffer.clear();
        simulate_block(local, map, static_cast<std::uint64_t>(b),
                       trials_in_block(config.n_symbols, b), pure_reference, nullptr, &buffer);
        for (const Sample& s : buffer) amplitudes.push_back(std::abs(s));
    }
    return amplitudes;
}

}  // namespace

SerEstimate estimate_ser(const SimConfig& config) {
    validate_config(config);
    const CovertCodingMap map = build_coding_map(config.m_c, config.d);
    const std::int64_t blocks = block_count(config.n_symbols);
    std::vector<BlockCounts> per_block(static_cast<std::size_t>(blocks));

    const int max_threads = std::max(1, config.threads);
    const int workers = static_cast<int>(std::min<std::int64_t>(max_threads, blocks));
    if (workers <= 1) {
        for (std::int64_t b = 0; b < blocks; ++b) {
            simulate_block(config, map, static_cast<std::uint64_t>(b),
                           trials_in_block(config.n_symbols, b), false,
                           &per_block[static_cast<std::size_t>(b)], nullptr);
        }
    } else {
        std::atomic<std::int64_t> next{0};
        auto worker = [&]() {
            for (;;) {
                const std::int64_t b = next.fetch_add(1);
                if (b >= blocks) return;
                simulate_block(config, map, static_cast<std::uint64_t>(b),
                               trials_in_block(config.n_symbols, b), false,
                               &per_block[static_cast<std::size_t>(b)], nullptr);
            }
        };
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    SerEstimate estimate;
    estimate.n = config.n_symbols;
    for (const BlockCounts& c : per_block) {
        estimate.errors_primary += c.primary_errors;
        estimate.errors_covert += c.covert_errors;
    }
    const double n = static_cast<double>(estimate.n);
    estimate.ser_primary = static_cast<double>(estimate.errors_primary) / n;
    estimate.ser_covert = static_cast<double>(estimate.errors_covert) / n;
    estimate.sigma_primary = std::sqrt(estimate.ser_primary * (1.0 - estimate.ser_primary) / n);
    estimate.sigma_covert = std::sqrt(estimate.ser_covert * (1.0 - estimate.ser_covert) / n);
    return estimate;
}

DetectabilityReport amplitude_statistics(const SimConfig& config, int bins) {
    validate_config(config);
    if (bins < 10) {
        throw std::invalid_argument("amplitude_statistics: need at least 10 bins");
    }
    std::vector<double> amplitudes = amplitudes_of(config, false);
    std::vector<double> reference = amplitudes_of(config, true);

    DetectabilityReport report;
    report.ks_statistic = ks_two_sample(amplitudes, reference);

    // Uniform bins up to the 99.9th percentile; the last bin stretches to the
    // maximum so every sample is counted and the density still integrates
    // to one.
    std::vector<double> sorted = amplitudes;
    std::sort(sorted.begin(), sorted.end());
    const double maximum = sorted.back();
    double hi = sorted[static_cast<std::size_t>(0.999 * (sorted.size() - 1))];
    if (hi <= 0.0) hi = maximum;
    if (hi <= 0.0) hi = 1.0;

    report.bin_edges.resize(static_cast<std::size_t>(bins) + 1);
    const double width = hi / bins;
    for (int i = 0; i <= bins; ++i) report.bin_edges[static_cast<std::size_t>(i)] = width * i;
    if (maximum > hi) report.bin_edges.back() = maximum;

    std::vector<std::int64_t> counts(static_cast<std::size_t>(bins), 0);
    for (double a : sorted) {
        int bin = width > 0.0 ? static_cast<int>(a / width) : 0;
        if (bin >= bins) bin = bins - 1;
        ++counts[static_cast<std::size_t>(bin)];
    }
    report.densities.resize(static_cast<std::size_t>(bins));
    const double n = static_cast<double>(sorted.size());
    for (int i = 0; i < bins; ++i) {
        const double bin_width = report.bin_edges[static_cast<std::size_t>(i) + 1] -
                                 report.bin_edges[static_cast<std::size_t>(i)];
        report.densities[static_cast<std::size_t>(i)] =
            static_cast<double>(counts[static_cast<std::size_t>(i)]) / (n * bin_width);
    }
    return report;
}

std::vector<Sample> scatter_export(const SimConfig& config, std::int64_t n) {
    validate_config(config);
    if (n < 1) {
        throw std::invalid_argument("scatter_export: need n >= 1");
    }
    const CovertCodingMap map = build_coding_map(config.m_c, config.d);
    std::vector<Sample> samples;
    samples.reserve(static_cast<std::size_t>(n));
    const std::int64_t blocks = block_count(n);
    std::vector<Sample> buffer;
    for (std::int64_t b = 0; b < blocks; ++b) {
        buffer.clear();
        simulate_block(config, map, static_cast<std::uint64_t>(b), trials_in_block(n, b), false,
                       nullptr, &buffer);
        samples.insert(samples.end(), buffer.begin(), buffer.end());
    }
    return samples;
}

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) {
        throw std::invalid_argument("ks_two_sample: both samples must be non-empty");
    }
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    std::size_t ia = 0;
    std::size_t ib = 0;
    double ks = 0.0;
    while (ia < a.size() && ib < b.size()) {
        const double x = std::min(a[ia], b[ib]);
        while (ia < a.size() && a[ia] <= x) ++ia;
        while (ib < b.size() && b[ib] <= x) ++ib;
        const double gap = std::fabs(static_cast<double>(ia) / na - static_cast<double>(ib) / nb);
        if (gap > ks) ks = gap;
    }
    return ks;
}

}  // namespace pnask
