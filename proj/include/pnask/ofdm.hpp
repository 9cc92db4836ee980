#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "pnask/channel.hpp"
#include "pnask/modem.hpp"
#include "pnask/types.hpp"

namespace pnask {

inline constexpr int kNumSubcarriers = 64;
inline constexpr int kNumDataSubcarriers = 48;
inline constexpr int kNumPilotSubcarriers = 4;
inline constexpr int kNumGuardSubcarriers = 12;
inline constexpr int kCyclicPrefixLength = 16;
inline constexpr int kSubframeSamples = kNumSubcarriers + kCyclicPrefixLength;

inline constexpr std::array<int, kNumPilotSubcarriers> kPilotSubcarriers{-21, -7, 7, 21};
inline constexpr std::array<double, kNumPilotSubcarriers> kPilotValues{1.0, 1.0, 1.0, -1.0};

/// Data subcarrier indices in ascending order: the 52 used carriers
/// (-26..-1, +1..+26) minus the four pilots.
const std::array<int, kNumDataSubcarriers>& data_subcarriers();

/// Signed subcarrier index (-32..31) to FFT bin (0..63).
int subcarrier_bin(int subcarrier);

/// In-place unitary DFT (1/sqrt(N) both directions); size must be a power
/// of two.
void fft_unitary(std::vector<Sample>& buffer, bool inverse);

struct OfdmSubframe {
    std::array<Sample, kNumSubcarriers> slots;  // frequency domain, bin order
    std::vector<Sample> time;                   // kSubframeSamples, prefix first
};

/// Lays out 48 data samples plus pilots and guards, then produces the
/// time-domain block with cyclic prefix.
OfdmSubframe assemble_subframe(const std::vector<Sample>& data);

/// Strips the prefix, transforms back, and returns the 48 data slots. With
/// equalize set, divides by the single-tap gain estimated from the pilots
/// (also reported through gain_estimate when non-null).
std::vector<Sample> disassemble_subframe(const std::vector<Sample>& time_block, bool equalize,
                                         Sample* gain_estimate = nullptr);

std::uint32_t crc32_ieee(const std::uint8_t* data, std::size_t size);
std::uint16_t crc16_ccitt(const std::uint8_t* data, std::size_t size);

/// Payload modulation of a packet. Headers are fixed: BPSK for the primary
/// stream and, when m_c > 1, one covert bit per header symbol at two levels
/// with step 0.5.
struct PacketConfig {
    int m = 4;
    int m_c = 2;
    double d = 0.5;
};

/// Wire format per stream: a 32-bit header (16-bit user-byte count plus its
/// 16-bit CRC) followed by a fixed 96-byte payload region consisting of the
/// user bytes, zero padding to 92 bytes, and a 4-byte CRC over those 92.
inline constexpr int kPacketPayloadBytes = 96;
inline constexpr int kPacketUserBytes = 92;
inline constexpr int kPacketHeaderSymbols = 32;

struct PacketDecodeResult {
    bool primary_ok = false;
    bool covert_ok = false;
    std::vector<std::uint8_t> primary_bytes;
    std::vector<std::uint8_t> covert_bytes;
};

/// Number of data symbols (header + payload region) in one packet.
int packet_symbol_count(const PacketConfig& config);
/// Number of OFDM subframes needed to carry them.
int packet_subframe_count(const PacketConfig& config);

/// Modulates both streams into concatenated time-domain subframe blocks.
/// Covert payload requires m_c > 1 and both payloads are capped at 92 bytes.
std::vector<Sample> build_packet(const std::vector<std::uint8_t>& primary_payload,
                                 const std::vector<std::uint8_t>& covert_payload,
                                 const PacketConfig& config);

/// Inverse of build_packet; CRC failures are reported per stream in the
/// result, never thrown.
PacketDecodeResult decode_packet(const std::vector<Sample>& time_samples,
                                 const PacketConfig& config, bool equalize = true);

/// Per-symbol hard decisions for a packet's header and payload symbols in
/// transmission order (padding slots excluded). Applied to the transmit
/// waveform with equalize off this recovers the sent pairs exactly, which
/// makes symbol-error counting possible without access to the encoder state.
std::vector<SymbolPair> demodulate_packet_symbols(const std::vector<Sample>& time_samples,
                                                  const PacketConfig& config,
                                                  bool equalize = true);

/// build -> block-fading channel (one gain per subframe) -> decode.
PacketDecodeResult packet_roundtrip(const std::vector<std::uint8_t>& primary_payload,
                                    const std::vector<std::uint8_t>& covert_payload,
                                    const PacketConfig& config, const ChannelModel& channel,
                                    const NoiseSpec& noise, std::uint64_t seed,
                                    std::uint64_t stream = 0);

}  // namespace pnask
