#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace pnask {

/// One baseband I/Q sample on the E_s-normalized constellation.
using Sample = std::complex<double>;

/// Random source used by all stochastic operations. Every operation that
/// draws randomness takes an explicit Rng&, so workers can hold independent
/// seeded streams.
using Rng = std::mt19937_64;

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kTwoPi = 2.0 * kPi;

inline bool is_power_of_two(int v) { return v > 0 && (v & (v - 1)) == 0; }

/// Binary-reflected Gray code of v.
inline unsigned gray_encode(unsigned v) { return v ^ (v >> 1); }

/// Inverse of gray_encode.
inline unsigned gray_decode(unsigned g) {
    unsigned b = 0;
    for (; g; g >>= 1) b ^= g;
    return b;
}

/// Expands (seed, stream_index) into an independent 64-bit generator state.
/// SplitMix64 mixing keeps streams decorrelated without a global sequence,
/// so trial blocks can be processed by any number of workers.
inline Rng make_stream_rng(std::uint64_t seed, std::uint64_t stream_index) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream_index + 1);
    auto mix = [](std::uint64_t x) {
        x ^= x >> 30;
        x *= 0xBF58476D1CE4E5B9ULL;
        x ^= x >> 27;
        x *= 0x94D049BB133111EBULL;
        x ^= x >> 31;
        return x;
    };
    std::seed_seq seq{static_cast<std::uint32_t>(mix(z)),
                      static_cast<std::uint32_t>(mix(z) >> 32),
                      static_cast<std::uint32_t>(mix(z + 1)),
                      static_cast<std::uint32_t>(mix(z + 1) >> 32)};
    return Rng(seq);
}

}  // namespace pnask
