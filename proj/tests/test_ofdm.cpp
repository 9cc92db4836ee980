#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstring>
#include <string>
#include <vector>

#include "oracle_helpers.hpp"
#include "pnask/ofdm.hpp"
#include "pnask/types.hpp"

using namespace pnask;

namespace {

std::vector<Sample> random_data_block(std::uint64_t seed) {
    Rng rng = make_stream_rng(seed, 0);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<Sample> data(kNumDataSubcarriers);
    for (auto& s : data) s = Sample{normal(rng), normal(rng)};
    return data;
}

std::vector<std::uint8_t> random_bytes(std::size_t n, std::uint64_t seed) {
    Rng rng = make_stream_rng(seed, 1);
    std::uniform_int_distribution<int> byte(0, 255);
    std::vector<std::uint8_t> out(n);
    for (auto& b : out) b = static_cast<std::uint8_t>(byte(rng));
    return out;
}

}  // namespace

TEST_CASE("data subcarrier layout") {
    const auto& carriers = data_subcarriers();
    CHECK(carriers.size() == 48);
    for (std::size_t i = 0; i < carriers.size(); ++i) {
        const int s = carriers[i];
        CHECK(s != 0);
        CHECK(std::abs(s) <= 26);
        for (int pilot : kPilotSubcarriers) CHECK(s != pilot);
        if (i > 0) CHECK(carriers[i] > carriers[i - 1]);
    }
}

TEST_CASE("subcarrier to bin mapping") {
    CHECK(subcarrier_bin(0) == 0);
    CHECK(subcarrier_bin(1) == 1);
    CHECK(subcarrier_bin(31) == 31);
    CHECK(subcarrier_bin(-1) == 63);
    CHECK(subcarrier_bin(-32) == 32);
    CHECK_THROWS_AS(subcarrier_bin(32), std::out_of_range);
    CHECK_THROWS_AS(subcarrier_bin(-33), std::out_of_range);

    std::array<bool, 64> used{};
    for (int s = -32; s <= 31; ++s) {
        const int bin = subcarrier_bin(s);
        CHECK(bin >= 0);
        CHECK(bin < 64);
        CHECK(!used[static_cast<std::size_t>(bin)]);
        used[static_cast<std::size_t>(bin)] = true;
    }
}

TEST_CASE("unitary fft against a direct dft") {
    Rng rng = make_stream_rng(99, 0);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int n : {2, 8, 64}) {
        std::vector<Sample> x(static_cast<std::size_t>(n));
        for (auto& s : x) s = Sample{normal(rng), normal(rng)};

        auto fwd = x;
        fft_unitary(fwd, false);
        const auto want = oracle::dft_unitary(x, false);
        REQUIRE(fwd.size() == want.size());
        for (std::size_t i = 0; i < fwd.size(); ++i) {
            CHECK(std::abs(fwd[i] - want[i]) < 1e-12);
        }

        // Round trip and Parseval.
        auto back = fwd;
        fft_unitary(back, true);
        double energy_x = 0.0;
        double energy_f = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            CHECK(std::abs(back[i] - x[i]) < 1e-12);
            energy_x += std::norm(x[i]);
            energy_f += std::norm(fwd[i]);
        }
        CHECK(energy_x == doctest::Approx(energy_f).epsilon(1e-12));
    }
    std::vector<Sample> bad(48);
    CHECK_THROWS_AS(fft_unitary(bad, false), std::invalid_argument);
}

TEST_CASE("subframe assembly places data, pilots, and guards") {
    const auto data = random_data_block(1234);
    const OfdmSubframe sub = assemble_subframe(data);

    const auto& carriers = data_subcarriers();
    for (std::size_t i = 0; i < carriers.size(); ++i) {
        CHECK(sub.slots[static_cast<std::size_t>(subcarrier_bin(carriers[i]))] == data[i]);
    }
    for (int p = 0; p < kNumPilotSubcarriers; ++p) {
        const Sample v = sub.slots[static_cast<std::size_t>(subcarrier_bin(kPilotSubcarriers[p]))];
        CHECK(v.real() == doctest::Approx(kPilotValues[p]));
        CHECK(v.imag() == doctest::Approx(0.0));
    }
    int zeros = 0;
    for (int s = -32; s <= 31; ++s) {
        const bool guard = s == 0 || std::abs(s) >= 27;
        if (guard) {
            CHECK(sub.slots[static_cast<std::size_t>(subcarrier_bin(s))] == Sample{0.0, 0.0});
            ++zeros;
        }
    }
    CHECK(zeros == kNumGuardSubcarriers);

    REQUIRE(sub.time.size() == static_cast<std::size_t>(kSubframeSamples));
    for (int i = 0; i < kCyclicPrefixLength; ++i) {
        CHECK(std::abs(sub.time[static_cast<std::size_t>(i)] -
                       sub.time[static_cast<std::size_t>(i + kNumSubcarriers)]) < 1e-15);
    }

    CHECK_THROWS_AS(assemble_subframe(std::vector<Sample>(47)), std::invalid_argument);
}

TEST_CASE("all-zero data leaves only the pilot tones") {
    const OfdmSubframe sub = assemble_subframe(std::vector<Sample>(48, Sample{0.0, 0.0}));
    std::vector<Sample> slots(sub.slots.begin(), sub.slots.end());
    fft_unitary(slots, true);
    for (int i = 0; i < kNumSubcarriers; ++i) {
        CHECK(std::abs(sub.time[static_cast<std::size_t>(i + kCyclicPrefixLength)] -
                       slots[static_cast<std::size_t>(i)]) < 1e-15);
    }
}

TEST_CASE("subframe roundtrip, flat channel equalization") {
    const auto data = random_data_block(777);
    const OfdmSubframe sub = assemble_subframe(data);

    const auto plain = disassemble_subframe(sub.time, false);
    REQUIRE(plain.size() == 48);
    for (std::size_t i = 0; i < 48; ++i) CHECK(std::abs(plain[i] - data[i]) < 1e-9);

    // A flat single-tap channel is removed by pilot equalization.
    const Sample h = std::polar(0.8, 0.7);
    auto faded = sub.time;
    for (auto& s : faded) s *= h;
    Sample gain{};
    const auto equalized = disassemble_subframe(faded, true, &gain);
    CHECK(std::abs(gain - h) < 1e-6);
    for (std::size_t i = 0; i < 48; ++i) CHECK(std::abs(equalized[i] - data[i]) < 1e-6);

    CHECK_THROWS_AS(disassemble_subframe(std::vector<Sample>(79), false), std::invalid_argument);
}

TEST_CASE("crc reference vectors") {
    const char* nine = "123456789";
    CHECK(crc32_ieee(reinterpret_cast<const std::uint8_t*>(nine), 9) == 0xCBF43926u);
    CHECK(crc32_ieee(nullptr, 0) == 0x00000000u);
    CHECK(crc16_ccitt(reinterpret_cast<const std::uint8_t*>(nine), 9) == 0x29B1u);
    CHECK(crc16_ccitt(nullptr, 0) == 0xFFFFu);
}

TEST_CASE("packet sizing arithmetic") {
    // 96 payload bytes = 768 bits per stream; the slower stream dominates.
    PacketConfig config{4, 2, 0.5};
    CHECK(packet_symbol_count(config) == 32 + 768);
    CHECK(packet_subframe_count(config) == (32 + 768 + 47) / 48);

    config = PacketConfig{8, 2, 0.5};
    CHECK(packet_symbol_count(config) == 32 + 768);  // covert stream dominates

    config = PacketConfig{8, 8, 0.1};
    CHECK(packet_symbol_count(config) == 32 + 256);

    config = PacketConfig{2, 1, 0.0};
    CHECK(packet_symbol_count(config) == 32 + 768);
}

TEST_CASE("noise-free packets decode byte-exactly") {
    for (std::size_t primary_len : {0UL, 1UL, 17UL, 92UL}) {
        for (std::size_t covert_len : {0UL, 5UL, 92UL}) {
            const auto primary = random_bytes(primary_len, 100 + primary_len);
            const auto covert = random_bytes(covert_len, 200 + covert_len);
            const PacketConfig config{8, 4, 0.1};
            const auto time = build_packet(primary, covert, config);
            REQUIRE(time.size() ==
                    static_cast<std::size_t>(packet_subframe_count(config) * kSubframeSamples));
            const auto decoded = decode_packet(time, config);
            CHECK(decoded.primary_ok);
            CHECK(decoded.covert_ok);
            CHECK(decoded.primary_bytes == primary);
            CHECK(decoded.covert_bytes == covert);
        }
    }
}

TEST_CASE("single-level packets carry no covert payload") {
    const PacketConfig config{4, 1, 0.0};
    const auto primary = random_bytes(40, 3);
    const auto time = build_packet(primary, {}, config);
    const auto decoded = decode_packet(time, config);
    CHECK(decoded.primary_ok);
    CHECK(decoded.covert_ok);
    CHECK(decoded.primary_bytes == primary);
    CHECK(decoded.covert_bytes.empty());
    CHECK_THROWS_AS(build_packet(primary, random_bytes(4, 4), config), std::invalid_argument);
}

TEST_CASE("payloads beyond the packet capacity are rejected") {
    const PacketConfig config{4, 2, 0.5};
    CHECK_THROWS_AS(build_packet(random_bytes(93, 5), {}, config), std::invalid_argument);
    CHECK_THROWS_AS(build_packet({}, random_bytes(93, 6), config), std::invalid_argument);
}

TEST_CASE("per-symbol demodulation of the transmit waveform is exact") {
    const PacketConfig config{8, 4, 0.1};
    const auto primary = random_bytes(64, 11);
    const auto covert = random_bytes(30, 12);
    const auto time = build_packet(primary, covert, config);
    const auto tx_symbols = demodulate_packet_symbols(time, config, false);
    CHECK(tx_symbols.size() == static_cast<std::size_t>(packet_symbol_count(config)));

    // Re-demodulating the same waveform after equalization (gain is one)
    // gives the same decisions.
    const auto rx_symbols = demodulate_packet_symbols(time, config, true);
    REQUIRE(rx_symbols.size() == tx_symbols.size());
    int mismatches = 0;
    for (std::size_t i = 0; i < tx_symbols.size(); ++i) {
        if (!(rx_symbols[i] == tx_symbols[i])) ++mismatches;
    }
    CHECK(mismatches == 0);
}

TEST_CASE("pilot tones are immune to the data content") {
    const PacketConfig config{4, 2, 0.5};
    const auto time = build_packet(random_bytes(92, 21), random_bytes(92, 22), config);
    for (int block = 0; block < packet_subframe_count(config); ++block) {
        std::vector<Sample> one(time.begin() + block * kSubframeSamples,
                                time.begin() + (block + 1) * kSubframeSamples);
        std::vector<Sample> spectrum(one.begin() + kCyclicPrefixLength, one.end());
        fft_unitary(spectrum, false);
        for (int p = 0; p < kNumPilotSubcarriers; ++p) {
            const Sample v =
                spectrum[static_cast<std::size_t>(subcarrier_bin(kPilotSubcarriers[p]))];
            CHECK(std::abs(v - Sample{kPilotValues[p], 0.0}) < 1e-9);
        }
    }
}

TEST_CASE("high snr roundtrip through fading recovers both streams") {
    const PacketConfig config{4, 2, 0.5};
    int ok_primary = 0;
    int ok_covert = 0;
    const int packets = 200;
    for (int i = 0; i < packets; ++i) {
        const auto primary = random_bytes(92, 1000 + static_cast<std::uint64_t>(i));
        const auto covert = random_bytes(92, 2000 + static_cast<std::uint64_t>(i));
        const auto r = packet_roundtrip(primary, covert, config, ChannelModel::awgn(),
                                        NoiseSpec::from_db(25.0),
                                        static_cast<std::uint64_t>(i), 0);
        if (r.primary_ok && r.primary_bytes == primary) ++ok_primary;
        if (r.covert_ok && r.covert_bytes == covert) ++ok_covert;
    }
    CHECK(ok_primary >= 198);
    CHECK(ok_covert >= 198);
}

TEST_CASE("noiseless fading roundtrip is exact thanks to pilot equalization") {
    const PacketConfig config{8, 2, 0.4};
    const auto primary = random_bytes(50, 31);
    const auto covert = random_bytes(20, 32);
    const auto r = packet_roundtrip(primary, covert, config, ChannelModel::rayleigh(1.0),
                                    NoiseSpec::noiseless(), 5, 0);
    CHECK(r.primary_ok);
    CHECK(r.covert_ok);
    CHECK(r.primary_bytes == primary);
    CHECK(r.covert_bytes == covert);
}

TEST_CASE("packet roundtrip is deterministic in the seed") {
    const PacketConfig config{4, 2, 0.5};
    const auto primary = random_bytes(92, 41);
    const auto covert = random_bytes(92, 42);
    const auto a = packet_roundtrip(primary, covert, config, ChannelModel::rayleigh(1.0),
                                    NoiseSpec::from_db(12.0), 9, 0);
    const auto b = packet_roundtrip(primary, covert, config, ChannelModel::rayleigh(1.0),
                                    NoiseSpec::from_db(12.0), 9, 0);
    CHECK(a.primary_ok == b.primary_ok);
    CHECK(a.covert_ok == b.covert_ok);
    CHECK(a.primary_bytes == b.primary_bytes);
    CHECK(a.covert_bytes == b.covert_bytes);
}
