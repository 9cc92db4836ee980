#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pnask/types.hpp"

namespace pnask {

/// Sidecar metadata for an I/Q capture file. The sample format is fixed:
/// interleaved (re, im) IEEE-754 binary32 pairs, little-endian.
struct IqMetadata {
    double sample_rate_hz = 20e6;
    double center_frequency_hz = 2.412e9;
    std::int64_t num_samples = 0;
    std::string format = "cf32_le";
};

/// Writes samples to `path` and the JSON sidecar to `path` + ".json".
/// meta.num_samples is filled in from the data.
void write_iq(const std::string& path, const std::vector<Sample>& samples, IqMetadata meta = {});

std::vector<Sample> read_iq(const std::string& path);

IqMetadata read_iq_metadata(const std::string& sidecar_path);

}  // namespace pnask
