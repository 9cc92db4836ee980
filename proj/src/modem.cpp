#include "pnask/modem.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace pnask {

CovertCodingMap build_coding_map(int covert_order, double amplitude_step) {
    if (!is_power_of_two(covert_order))
        throw std::invalid_argument("covert order must be a power of two >= 1, got " +
                                    std::to_string(covert_order));
    CovertCodingMap map;
    map.covert_order = covert_order;
    if (covert_order == 1) {
        map.amplitude_step = 0.0;
        map.levels = {1.0};
        return map;
    }
    const double bound = 1.0 / (covert_order - 1);
    if (!(amplitude_step > 0.0))
        throw std::invalid_argument("amplitude step must be positive for more than one covert level");
    if (!(amplitude_step < bound))
        throw std::invalid_argument("amplitude step " + std::to_string(amplitude_step) +
                                    " violates step < 1/(covert_order-1) = " + std::to_string(bound));
    map.amplitude_step = amplitude_step;
    map.levels.resize(static_cast<size_t>(covert_order));
    for (int i = 0; i < covert_order; ++i)
        map.levels[static_cast<size_t>(i)] = 1.0 - i * amplitude_step;
    map.thresholds.resize(static_cast<size_t>(covert_order - 1));
    for (int i = 0; i + 1 < covert_order; ++i)
        map.thresholds[static_cast<size_t>(i)] =
            0.5 * (map.levels[static_cast<size_t>(i)] + map.levels[static_cast<size_t>(i) + 1]);
    return map;
}

double psk_phase_offset(int psk_order) { return psk_order == 2 ? 0.0 : kPi / psk_order; }

static void check_psk_order(int psk_order) {
    if (psk_order < 2 || !is_power_of_two(psk_order))
        throw std::invalid_argument("PSK order must be a power of two >= 2, got " +
                                    std::to_string(psk_order));
}

Sample psk_modulate(int symbol_index, int psk_order) {
    check_psk_order(psk_order);
    if (symbol_index < 0 || symbol_index >= psk_order)
        throw std::out_of_range("primary symbol index " + std::to_string(symbol_index) +
                                " outside [0, " + std::to_string(psk_order) + ")");
    const unsigned sector = gray_decode(static_cast<unsigned>(symbol_index));
    const double phase = kTwoPi * sector / psk_order + psk_phase_offset(psk_order);
    return std::polar(1.0, phase);
}

Sample pnask_modulate(const SymbolPair& pair, int psk_order, const CovertCodingMap& map) {
    if (pair.covert_index < 0 || pair.covert_index >= map.covert_order)
        throw std::out_of_range("covert symbol index " + std::to_string(pair.covert_index) +
                                " outside [0, " + std::to_string(map.covert_order) + ")");
    return psk_modulate(pair.primary_index, psk_order) * map.level(pair.covert_index);
}

std::pair<double, double> displacement_interval(const CovertCodingMap& map, int covert_index) {
    const int mc = map.covert_order;
    if (covert_index < 0 || covert_index >= mc)
        throw std::out_of_range("covert symbol index outside the coding map");
    if (mc == 1) return {1.0, 1.0};
    const double k = map.level(covert_index);
    if (mc == 2) {
        const double w = std::min(1.0 - map.amplitude_step, 0.5 * map.amplitude_step);
        return {k - w, k + w};
    }
    const double lo = covert_index == mc - 1
                          ? std::max(0.0, 2.0 * k - map.thresholds[static_cast<size_t>(mc - 2)])
                          : map.thresholds[static_cast<size_t>(covert_index)];
    const double hi = covert_index == 0
                          ? 2.0 * k - map.thresholds[0]
                          : map.thresholds[static_cast<size_t>(covert_index - 1)];
    return {lo, hi};
}

Sample apply_displacement(Sample sample, int covert_index, const CovertCodingMap& map, Rng& rng) {
    if (map.covert_order == 1) return sample;
    const auto [lo, hi] = displacement_interval(map, covert_index);
    if (!(hi > lo)) return sample;
    const double k = map.level(covert_index);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double magnitude;
    if (map.covert_order == 2) {
        const double w = 0.5 * (hi - lo);
        const double u = unit(rng);
        const double sign = unit(rng) < 0.5 ? -1.0 : 1.0;
        magnitude = k + sign * u * w;
    } else {
        magnitude = lo + unit(rng) * (hi - lo);
    }
    // Floating-point edge draws could land exactly on a threshold; keep the
    // guarantee that displacement alone never flips the covert decision.
    if (magnitude <= 0.0 || quantize_covert_level(magnitude, map) != covert_index)
        magnitude = k;
    return std::polar(magnitude, std::arg(sample));
}

int quantize_covert_level(double magnitude, const CovertCodingMap& map) {
    int position = 0;
    for (double threshold : map.thresholds) {
        if (threshold > magnitude)
            ++position;
        else
            break;
    }
    return position;
}

SymbolPair pnask_demodulate(Sample received, int psk_order, const CovertCodingMap& map) {
    check_psk_order(psk_order);
    const double step = kTwoPi / psk_order;
    const double theta = std::arg(received) - psk_phase_offset(psk_order);
    long sector = std::lround(theta / step) % psk_order;
    if (sector < 0) sector += psk_order;
    SymbolPair pair;
    pair.primary_index = static_cast<int>(gray_encode(static_cast<unsigned>(sector)));
    pair.covert_index = quantize_covert_level(std::abs(received), map);
    return pair;
}

unsigned covert_bits_for_index(int covert_index, int covert_order) {
    if (covert_index < 0 || covert_index >= covert_order)
        throw std::out_of_range("covert symbol index outside [0, covert_order)");
    return gray_encode(static_cast<unsigned>(covert_order - 1 - covert_index));
}

int covert_index_for_bits(unsigned bits, int covert_order) {
    if (bits >= static_cast<unsigned>(covert_order))
        throw std::out_of_range("covert bit group outside [0, covert_order)");
    return covert_order - 1 - static_cast<int>(gray_decode(bits));
}

}  // namespace pnask
