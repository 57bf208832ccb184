// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rfss/impairments.hpp"

namespace rfss {

/// Per-sample metadata, serialized to one JSON string per corpus row.
/// Round-trips losslessly through its JSON form.
struct SampleMetadata {
    int num_sources = 0;
    std::vector<std::string> standards;
    std::string mixing_mode;
    std::vector<double> snr_db;
    std::vector<std::string> channel_types;
    std::vector<ImpairmentDraw> impairments;
    std::vector<double> powers_db;
    std::vector<double> freq_offsets_hz;
    std::vector<int> timing_offsets;
    uint64_t master_seed = 0;
    uint64_t sample_index = 0;

    std::string to_json() const;
    static SampleMetadata from_json(const std::string& text);

    bool operator==(const SampleMetadata&) const = default;
};

bool operator==(const ImpairmentDraw& a, const ImpairmentDraw& b);

}  // namespace rfss
