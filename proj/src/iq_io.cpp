#include "pnask/iq_io.hpp"

#include <bit>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace pnask {

namespace {

void put_float_le(std::ofstream& out, float value) {
    const auto bits = std::bit_cast<std::uint32_t>(value);
    const char bytes[4] = {
        static_cast<char>(bits & 0xff),
        static_cast<char>((bits >> 8) & 0xff),
        static_cast<char>((bits >> 16) & 0xff),
        static_cast<char>((bits >> 24) & 0xff),
    };
    out.write(bytes, 4);
}

float get_float_le(std::ifstream& in) {
    unsigned char bytes[4];
    in.read(reinterpret_cast<char*>(bytes), 4);
    const std::uint32_t bits = static_cast<std::uint32_t>(bytes[0]) |
                               (static_cast<std::uint32_t>(bytes[1]) << 8) |
                               (static_cast<std::uint32_t>(bytes[2]) << 16) |
                               (static_cast<std::uint32_t>(bytes[3]) << 24);
    return std::bit_cast<float>(bits);
}

}  // namespace

void write_iq(const std::string& path, const std::vector<Sample>& samples, IqMetadata meta) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("write_iq: cannot open " + path);
    }
    for (const Sample& s : samples) {
        put_float_le(out, static_cast<float>(s.real()));
        put_float_le(out, static_cast<float>(s.imag()));
    }
    out.close();
    if (!out) {
        throw std::runtime_error("write_iq: write failed on " + path);
    }

    meta.num_samples = static_cast<std::int64_t>(samples.size());
    nlohmann::ordered_json sidecar;
    sidecar["format"] = meta.format;
    sidecar["sample_rate_hz"] = meta.sample_rate_hz;
    sidecar["center_frequency_hz"] = meta.center_frequency_hz;
    sidecar["num_samples"] = meta.num_samples;
    std::ofstream side(path + ".json");
    if (!side) {
        throw std::runtime_error("write_iq: cannot open sidecar for " + path);
    }
    side << sidecar.dump(2) << '\n';
}

std::vector<Sample> read_iq(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("read_iq: cannot open " + path);
    }
    in.seekg(0, std::ios::end);
    const std::streamoff size = in.tellg();
    in.seekg(0, std::ios::beg);
    if (size < 0 || size % 8 != 0) {
        throw std::runtime_error("read_iq: file size is not a whole number of cf32 pairs");
    }
    std::vector<Sample> samples;
    samples.reserve(static_cast<std::size_t>(size / 8));
    for (std::streamoff i = 0; i < size / 8; ++i) {
        const float re = get_float_le(in);
        const float im = get_float_le(in);
        samples.emplace_back(re, im);
    }
    if (!in) {
        throw std::runtime_error("read_iq: truncated read on " + path);
    }
    return samples;
}

IqMetadata read_iq_metadata(const std::string& sidecar_path) {
    std::ifstream in(sidecar_path);
    if (!in) {
        throw std::runtime_error("read_iq_metadata: cannot open " + sidecar_path);
    }
    nlohmann::json parsed;
    in >> parsed;
    IqMetadata meta;
    meta.format = parsed.value("format", meta.format);
    meta.sample_rate_hz = parsed.value("sample_rate_hz", meta.sample_rate_hz);
    meta.center_frequency_hz = parsed.value("center_frequency_hz", meta.center_frequency_hz);
    meta.num_samples = parsed.value("num_samples", meta.num_samples);
    return meta;
}

}  // namespace pnask
