#include "pnask/ofdm.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pnask/modem.hpp"

namespace pnask {

namespace {

std::array<int, kNumDataSubcarriers> compute_data_subcarriers() {
    std::array<int, kNumDataSubcarriers> out{};
    std::size_t n = 0;
    for (int s = -26; s <= 26; ++s) {
        if (s == 0) continue;
        if (std::find(kPilotSubcarriers.begin(), kPilotSubcarriers.end(), s) !=
            kPilotSubcarriers.end()) {
            continue;
        }
        out[n++] = s;
    }
    return out;
}

unsigned bit_reverse(unsigned value, int bits) {
    unsigned out = 0;
    for (int i = 0; i < bits; ++i) {
        out = (out << 1) | ((value >> i) & 1u);
    }
    return out;
}

/// MSB-first bit packing over a byte vector.
class BitWriter {
  public:
    void put(unsigned value, int bits) {
        for (int i = bits - 1; i >= 0; --i) bits_.push_back((value >> i) & 1u);
    }
    const std::vector<std::uint8_t>& bits() const { return bits_; }

  private:
    std::vector<std::uint8_t> bits_;
};

class BitReader {
  public:
    explicit BitReader(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {}
    /// Reads `count` bits MSB-first; missing bits read as zero.
    unsigned get(int count) {
        unsigned value = 0;
        for (int i = 0; i < count; ++i) {
            const unsigned bit = pos_ < bits_.size() ? bits_[pos_] : 0u;
            value = (value << 1) | bit;
            ++pos_;
        }
        return value;
    }

  private:
    std::vector<std::uint8_t> bits_;
    std::size_t pos_ = 0;
};

std::vector<std::uint8_t> bytes_to_bits(const std::vector<std::uint8_t>& bytes) {
    std::vector<std::uint8_t> bits;
    bits.reserve(bytes.size() * 8);
    for (std::uint8_t byte : bytes) {
        for (int i = 7; i >= 0; --i) bits.push_back((byte >> i) & 1u);
    }
    return bits;
}

std::vector<std::uint8_t> bits_to_bytes(const std::vector<std::uint8_t>& bits) {
    std::vector<std::uint8_t> bytes(bits.size() / 8, 0);
    for (std::size_t i = 0; i < bytes.size(); ++i) {
        std::uint8_t byte = 0;
        for (int b = 0; b < 8; ++b) byte = static_cast<std::uint8_t>((byte << 1) | bits[i * 8 + b]);
        bytes[i] = byte;
    }
    return bytes;
}

int bits_per_symbol(int order) { return static_cast<int>(std::round(std::log2(double(order)))); }

/// 96-byte payload region: user bytes, zero padding to 92, 4-byte CRC over
/// those 92 (most significant CRC byte first).
std::vector<std::uint8_t> frame_payload(const std::vector<std::uint8_t>& user) {
    std::vector<std::uint8_t> region(kPacketUserBytes, 0);
    std::copy(user.begin(), user.end(), region.begin());
    const std::uint32_t crc = crc32_ieee(region.data(), region.size());
    region.push_back(static_cast<std::uint8_t>(crc >> 24));
    region.push_back(static_cast<std::uint8_t>(crc >> 16));
    region.push_back(static_cast<std::uint8_t>(crc >> 8));
    region.push_back(static_cast<std::uint8_t>(crc));
    return region;
}

/// 32 header bits: 16-bit user length, then CRC-16 of the two length bytes.
std::vector<std::uint8_t> header_bits(std::size_t length) {
    const std::uint8_t raw[2] = {static_cast<std::uint8_t>(length >> 8),
                                 static_cast<std::uint8_t>(length & 0xff)};
    BitWriter writer;
    writer.put(static_cast<unsigned>(length), 16);
    writer.put(crc16_ccitt(raw, 2), 16);
    return writer.bits();
}

struct HeaderFields {
    bool ok = false;
    std::size_t length = 0;
};

HeaderFields parse_header(BitReader& reader) {
    HeaderFields fields;
    const unsigned length = reader.get(16);
    const unsigned crc = reader.get(16);
    const std::uint8_t raw[2] = {static_cast<std::uint8_t>(length >> 8),
                                 static_cast<std::uint8_t>(length & 0xff)};
    fields.ok = crc16_ccitt(raw, 2) == crc && length <= kPacketUserBytes;
    fields.length = length;
    return fields;
}

void validate_packet_config(const PacketConfig& config) {
    psk_modulate(0, config.m);
    build_coding_map(config.m_c, config.d);
}

int payload_symbol_count(const PacketConfig& config) {
    const int payload_bits = kPacketPayloadBytes * 8;
    const int primary = (payload_bits + bits_per_symbol(config.m) - 1) / bits_per_symbol(config.m);
    if (config.m_c == 1) return primary;
    const int covert =
        (payload_bits + bits_per_symbol(config.m_c) - 1) / bits_per_symbol(config.m_c);
    return std::max(primary, covert);
}

}  // namespace

const std::array<int, kNumDataSubcarriers>& data_subcarriers() {
    static const std::array<int, kNumDataSubcarriers> table = compute_data_subcarriers();
    return table;
}

int subcarrier_bin(int subcarrier) {
    if (subcarrier < -kNumSubcarriers / 2 || subcarrier >= kNumSubcarriers / 2) {
        throw std::out_of_range("subcarrier_bin: index outside -32..31");
    }
    return (subcarrier + kNumSubcarriers) % kNumSubcarriers;
}

void fft_unitary(std::vector<Sample>& buffer, bool inverse) {
    const std::size_t n = buffer.size();
    if (n == 0 || (n & (n - 1)) != 0) {
        throw std::invalid_argument("fft_unitary: size must be a power of two");
    }
    int bits = 0;
    while ((std::size_t{1} << bits) < n) ++bits;

    for (unsigned i = 0; i < n; ++i) {
        const unsigned j = bit_reverse(i, bits);
        if (j > i) std::swap(buffer[i], buffer[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double angle = (inverse ? kTwoPi : -kTwoPi) / static_cast<double>(len);
        const Sample step = std::polar(1.0, angle);
        for (std::size_t start = 0; start < n; start += len) {
            Sample w{1.0, 0.0};
            for (std::size_t k = 0; k < len / 2; ++k) {
                const Sample even = buffer[start + k];
                const Sample odd = buffer[start + k + len / 2] * w;
                buffer[start + k] = even + odd;
                buffer[start + k + len / 2] = even - odd;
                w *= step;
            }
        }
    }
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (Sample& value : buffer) value *= scale;
}

OfdmSubframe assemble_subframe(const std::vector<Sample>& data) {
    if (data.size() != kNumDataSubcarriers) {
        throw std::invalid_argument("assemble_subframe: need exactly 48 data samples");
    }
    OfdmSubframe frame;
    frame.slots.fill(Sample{0.0, 0.0});
    const auto& carriers = data_subcarriers();
    for (int i = 0; i < kNumDataSubcarriers; ++i) {
        frame.slots[static_cast<std::size_t>(subcarrier_bin(carriers[static_cast<std::size_t>(i)]))] =
            data[static_cast<std::size_t>(i)];
    }
    for (int p = 0; p < kNumPilotSubcarriers; ++p) {
        frame.slots[static_cast<std::size_t>(
            subcarrier_bin(kPilotSubcarriers[static_cast<std::size_t>(p)]))] =
            Sample{kPilotValues[static_cast<std::size_t>(p)], 0.0};
    }

    std::vector<Sample> time(frame.slots.begin(), frame.slots.end());
    fft_unitary(time, true);
    frame.time.reserve(kSubframeSamples);
    frame.time.assign(time.end() - kCyclicPrefixLength, time.end());
    frame.time.insert(frame.time.end(), time.begin(), time.end());
    return frame;
}

std::vector<Sample> disassemble_subframe(const std::vector<Sample>& time_block, bool equalize,
                                         Sample* gain_estimate) {
    if (time_block.size() != kSubframeSamples) {
        throw std::invalid_argument("disassemble_subframe: wrong block length");
    }
    std::vector<Sample> spectrum(time_block.begin() + kCyclicPrefixLength, time_block.end());
    fft_unitary(spectrum, false);

    // Least-squares single-tap estimate over the four unit-power pilots.
    Sample gain{0.0, 0.0};
    for (int p = 0; p < kNumPilotSubcarriers; ++p) {
        const Sample rx = spectrum[static_cast<std::size_t>(
            subcarrier_bin(kPilotSubcarriers[static_cast<std::size_t>(p)]))];
        gain += rx * kPilotValues[static_cast<std::size_t>(p)];
    }
    gain /= static_cast<double>(kNumPilotSubcarriers);
    if (gain_estimate) *gain_estimate = gain;

    std::vector<Sample> data;
    data.reserve(kNumDataSubcarriers);
    const auto& carriers = data_subcarriers();
    for (int i = 0; i < kNumDataSubcarriers; ++i) {
        Sample value =
            spectrum[static_cast<std::size_t>(subcarrier_bin(carriers[static_cast<std::size_t>(i)]))];
        if (equalize) value /= gain;
        data.push_back(value);
    }
    return data;
}

std::uint32_t crc32_ieee(const std::uint8_t* data, std::size_t size) {
    std::uint32_t crc = 0xffffffffu;
    for (std::size_t i = 0; i < size; ++i) {
        crc ^= data[i];
        for (int b = 0; b < 8; ++b) {
            crc = (crc >> 1) ^ (0xedb88320u & (~(crc & 1u) + 1u));
        }
    }
    return ~crc;
}

std::uint16_t crc16_ccitt(const std::uint8_t* data, std::size_t size) {
    std::uint16_t crc = 0xffff;
    for (std::size_t i = 0; i < size; ++i) {
        crc ^= static_cast<std::uint16_t>(data[i]) << 8;
        for (int b = 0; b < 8; ++b) {
            crc = (crc & 0x8000) ? static_cast<std::uint16_t>((crc << 1) ^ 0x1021)
                                 : static_cast<std::uint16_t>(crc << 1);
        }
    }
    return crc;
}

int packet_symbol_count(const PacketConfig& config) {
    validate_packet_config(config);
    return kPacketHeaderSymbols + payload_symbol_count(config);
}

int packet_subframe_count(const PacketConfig& config) {
    return (packet_symbol_count(config) + kNumDataSubcarriers - 1) / kNumDataSubcarriers;
}

std::vector<Sample> build_packet(const std::vector<std::uint8_t>& primary_payload,
                                 const std::vector<std::uint8_t>& covert_payload,
                                 const PacketConfig& config) {
    validate_packet_config(config);
    if (primary_payload.size() > kPacketUserBytes || covert_payload.size() > kPacketUserBytes) {
        throw std::invalid_argument("build_packet: payloads are capped at 92 bytes");
    }
    if (config.m_c == 1 && !covert_payload.empty()) {
        throw std::invalid_argument("build_packet: covert payload requires m_c > 1");
    }

    const bool covert_active = config.m_c > 1;
    const CovertCodingMap header_map = covert_active ? build_coding_map(2, 0.5) : build_coding_map(1);
    const CovertCodingMap payload_map = build_coding_map(config.m_c, config.d);

    std::vector<Sample> symbols;
    symbols.reserve(static_cast<std::size_t>(packet_symbol_count(config)));

    // Header: primary length at BPSK, covert length riding on the amplitude.
    const std::vector<std::uint8_t> primary_header = header_bits(primary_payload.size());
    const std::vector<std::uint8_t> covert_header =
        covert_active ? header_bits(covert_payload.size()) : std::vector<std::uint8_t>();
    for (int i = 0; i < kPacketHeaderSymbols; ++i) {
        SymbolPair pair;
        pair.primary_index = primary_header[static_cast<std::size_t>(i)];
        pair.covert_index =
            covert_active ? covert_index_for_bits(covert_header[static_cast<std::size_t>(i)], 2) : 0;
        symbols.push_back(pnask_modulate(pair, 2, header_map));
    }

    // Payload region: 96 bytes per stream, zero-bit padding past the end.
    BitReader primary_bits(bytes_to_bits(frame_payload(primary_payload)));
    BitReader covert_bits(bytes_to_bits(covert_active ? frame_payload(covert_payload)
                                                      : std::vector<std::uint8_t>()));
    const int n_payload_symbols = payload_symbol_count(config);
    const int bp = bits_per_symbol(config.m);
    const int bc = covert_active ? bits_per_symbol(config.m_c) : 0;
    for (int i = 0; i < n_payload_symbols; ++i) {
        SymbolPair pair;
        pair.primary_index = static_cast<int>(primary_bits.get(bp));
        pair.covert_index =
            covert_active ? covert_index_for_bits(covert_bits.get(bc), config.m_c) : 0;
        symbols.push_back(pnask_modulate(pair, config.m, payload_map));
    }

    // Pad the final subframe and emit time-domain blocks.
    const int subframes = packet_subframe_count(config);
    symbols.resize(static_cast<std::size_t>(subframes) * kNumDataSubcarriers, Sample{0.0, 0.0});
    std::vector<Sample> time;
    time.reserve(static_cast<std::size_t>(subframes) * kSubframeSamples);
    for (int f = 0; f < subframes; ++f) {
        const std::vector<Sample> chunk(symbols.begin() + f * kNumDataSubcarriers,
                                        symbols.begin() + (f + 1) * kNumDataSubcarriers);
        const OfdmSubframe frame = assemble_subframe(chunk);
        time.insert(time.end(), frame.time.begin(), frame.time.end());
    }
    return time;
}

std::vector<SymbolPair> demodulate_packet_symbols(const std::vector<Sample>& time_samples,
                                                  const PacketConfig& config, bool equalize) {
    validate_packet_config(config);
    const int subframes = packet_subframe_count(config);
    if (time_samples.size() != static_cast<std::size_t>(subframes) * kSubframeSamples) {
        throw std::invalid_argument(
            "demodulate_packet_symbols: sample count does not match the packet layout");
    }

    std::vector<Sample> slots;
    slots.reserve(static_cast<std::size_t>(subframes) * kNumDataSubcarriers);
    for (int f = 0; f < subframes; ++f) {
        const std::vector<Sample> block(time_samples.begin() + f * kSubframeSamples,
                                        time_samples.begin() + (f + 1) * kSubframeSamples);
        const std::vector<Sample> data = disassemble_subframe(block, equalize);
        slots.insert(slots.end(), data.begin(), data.end());
    }

    const bool covert_active = config.m_c > 1;
    const CovertCodingMap header_map = covert_active ? build_coding_map(2, 0.5) : build_coding_map(1);
    const CovertCodingMap payload_map = build_coding_map(config.m_c, config.d);

    std::vector<SymbolPair> pairs;
    pairs.reserve(static_cast<std::size_t>(packet_symbol_count(config)));
    for (int i = 0; i < kPacketHeaderSymbols; ++i) {
        pairs.push_back(pnask_demodulate(slots[static_cast<std::size_t>(i)], 2, header_map));
    }
    const int n_payload_symbols = payload_symbol_count(config);
    for (int i = 0; i < n_payload_symbols; ++i) {
        pairs.push_back(pnask_demodulate(
            slots[static_cast<std::size_t>(kPacketHeaderSymbols + i)], config.m, payload_map));
    }
    return pairs;
}

PacketDecodeResult decode_packet(const std::vector<Sample>& time_samples,
                                 const PacketConfig& config, bool equalize) {
    const std::vector<SymbolPair> pairs = demodulate_packet_symbols(time_samples, config, equalize);
    const bool covert_active = config.m_c > 1;

    std::vector<std::uint8_t> primary_header_bits;
    std::vector<std::uint8_t> covert_header_bits;
    for (int i = 0; i < kPacketHeaderSymbols; ++i) {
        const SymbolPair& pair = pairs[static_cast<std::size_t>(i)];
        primary_header_bits.push_back(static_cast<std::uint8_t>(pair.primary_index));
        if (covert_active) {
            covert_header_bits.push_back(
                static_cast<std::uint8_t>(covert_bits_for_index(pair.covert_index, 2)));
        }
    }

    std::vector<std::uint8_t> primary_payload_bits;
    std::vector<std::uint8_t> covert_payload_bits;
    const int n_payload_symbols = payload_symbol_count(config);
    const int bp = bits_per_symbol(config.m);
    const int bc = covert_active ? bits_per_symbol(config.m_c) : 0;
    for (int i = 0; i < n_payload_symbols; ++i) {
        const SymbolPair& pair = pairs[static_cast<std::size_t>(kPacketHeaderSymbols + i)];
        for (int b = bp - 1; b >= 0; --b) {
            primary_payload_bits.push_back((static_cast<unsigned>(pair.primary_index) >> b) & 1u);
        }
        if (covert_active) {
            const unsigned bits = covert_bits_for_index(pair.covert_index, config.m_c);
            for (int b = bc - 1; b >= 0; --b) {
                covert_payload_bits.push_back((bits >> b) & 1u);
            }
        }
    }

    const auto decode_stream = [](const std::vector<std::uint8_t>& head_bits,
                                  std::vector<std::uint8_t> body_bits, bool& ok_out)
        -> std::vector<std::uint8_t> {
        BitReader head(head_bits);
        const HeaderFields header = parse_header(head);
        body_bits.resize(static_cast<std::size_t>(kPacketPayloadBytes) * 8, 0);
        const std::vector<std::uint8_t> region = bits_to_bytes(body_bits);
        const std::uint32_t stored = (static_cast<std::uint32_t>(region[kPacketUserBytes]) << 24) |
                                     (static_cast<std::uint32_t>(region[kPacketUserBytes + 1]) << 16) |
                                     (static_cast<std::uint32_t>(region[kPacketUserBytes + 2]) << 8) |
                                     static_cast<std::uint32_t>(region[kPacketUserBytes + 3]);
        const bool crc_ok = crc32_ieee(region.data(), kPacketUserBytes) == stored;
        ok_out = header.ok && crc_ok;
        if (!ok_out) return {};
        return {region.begin(), region.begin() + static_cast<std::ptrdiff_t>(header.length)};
    };

    PacketDecodeResult result;
    result.primary_bytes =
        decode_stream(primary_header_bits, primary_payload_bits, result.primary_ok);
    if (covert_active) {
        result.covert_bytes =
            decode_stream(covert_header_bits, covert_payload_bits, result.covert_ok);
    } else {
        result.covert_ok = true;
    }
    return result;
}

PacketDecodeResult packet_roundtrip(const std::vector<std::uint8_t>& primary_payload,
                                    const std::vector<std::uint8_t>& covert_payload,
                                    const PacketConfig& config, const ChannelModel& channel,
                                    const NoiseSpec& noise, std::uint64_t seed,
                                    std::uint64_t stream) {
    validate(channel);
    const std::vector<Sample> tx = build_packet(primary_payload, covert_payload, config);
    Rng rng = make_stream_rng(seed, stream);

    // Block fading: one gain per subframe, noise on every time sample.
    std::vector<Sample> rx;
    rx.reserve(tx.size());
    const int subframes = packet_subframe_count(config);
    for (int f = 0; f < subframes; ++f) {
        const Sample h = draw_gain(channel, rng);
        for (int i = 0; i < kSubframeSamples; ++i) {
            const Sample x = tx[static_cast<std::size_t>(f * kSubframeSamples + i)];
            rx.push_back(h * x + draw_noise(noise, rng));
        }
    }
    return decode_packet(rx, config, true);
}

}  // namespace pnask
