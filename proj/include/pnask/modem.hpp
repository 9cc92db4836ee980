#pragma once

#include <utility>
#include <vector>

#include "pnask/types.hpp"

namespace pnask {

/// Amplitude levels and decision thresholds of the covert channel.
///
/// The covert alphabet is the set of radii levels[i] = 1 - i*step
/// (0-based), strictly positive and strictly decreasing. thresholds[i] is
/// the midpoint between levels[i] and levels[i+1]; a received magnitude is
/// quantized to the nearest level, with a magnitude exactly on a threshold
/// assigned to the outer (larger-radius) level.
struct CovertCodingMap {
    int covert_order = 1;        // number of covert symbols, power of two
    double amplitude_step = 0.0; // radius decrement between adjacent levels
    std::vector<double> levels;
    std::vector<double> thresholds;

    double level(int position) const { return levels[static_cast<size_t>(position)]; }
};

/// Builds the covert coding map for `covert_order` symbols with the given
/// amplitude step. For covert_order == 1 the step is ignored and the map is
/// the unit circle only. Throws std::invalid_argument when covert_order is
/// not a power of two, or when covert_order > 1 and the step is outside
/// (0, 1/(covert_order-1)); the upper bound is strict because a zero-radius
/// level cannot be demodulated.
CovertCodingMap build_coding_map(int covert_order, double amplitude_step = 0.0);

/// One transmitted symbol: phase index on the primary channel and level
/// index on the covert channel. primary_index is the Gray-labelled bit
/// pattern of the phase sector; covert_index is the 0-based level position
/// (0 = outer/unit radius).
struct SymbolPair {
    int primary_index = 0;
    int covert_index = 0;

    bool operator==(const SymbolPair&) const = default;
};

/// Phase offset of the PSK constellation: 0 for BPSK, pi/order otherwise
/// (symbols centered inside quadrants).
double psk_phase_offset(int psk_order);

/// Maps symbol_index to a unit-magnitude sample. The bit pattern is placed
/// on the circle through the Gray permutation, so geometrically adjacent
/// sectors carry patterns that differ in exactly one bit.
Sample psk_modulate(int symbol_index, int psk_order);

/// PSK sample for pair.primary_index scaled by the covert level radius.
/// Scaling never changes the phase.
Sample pnask_modulate(const SymbolPair& pair, int psk_order, const CovertCodingMap& map);

/// Magnitude interval (lo, hi) inside which a displaced symbol of the given
/// level still demodulates to that level. Interior levels get the band
/// between the two neighboring thresholds; edge levels get the band
/// mirrored about the level radius, clamped at zero.
std::pair<double, double> displacement_interval(const CovertCodingMap& map, int covert_index);

/// Re-draws the magnitude of `sample` uniformly inside the decision region
/// of covert_index, leaving the phase untouched. For a 2-level map the
/// displacement magnitude is uniform in (0, min{1-step, step/2}) with a
/// random sign. The output always demodulates to covert_index in a
/// noiseless channel; with a single covert level the sample is returned
/// unchanged.
Sample apply_displacement(Sample sample, int covert_index, const CovertCodingMap& map, Rng& rng);

/// Level position of a received magnitude (0-based, 0 = outer). A magnitude
/// exactly equal to a threshold goes to the outer level.
int quantize_covert_level(double magnitude, const CovertCodingMap& map);

/// Nearest-sector phase decision plus covert level quantization. Every
/// finite sample maps to some pair; demodulating a noiseless modulated
/// sample returns the transmitted pair exactly.
SymbolPair pnask_demodulate(Sample received, int psk_order, const CovertCodingMap& map);

/// Bit group carried by a covert level position. The outer radius carries
/// the all-ones-leading Gray label (e.g. "1" for 2 levels, "10" for 4), and
/// adjacent levels differ in exactly one bit.
unsigned covert_bits_for_index(int covert_index, int covert_order);

/// Inverse of covert_bits_for_index.
int covert_index_for_bits(unsigned bits, int covert_order);

}  // namespace pnask
