// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>

#include "rfss/channel.hpp"
#include "rfss/mixer.hpp"
#include "rfss/sample_metadata.hpp"

namespace rfss {

/// Which stage is stored as the separation target.
enum class TargetStage { clean, post_channel };

/// Where AWGN enters: once per source inside its chain, or once on the sum.
enum class NoisePlacement { per_source, mixture };

TargetStage target_stage_from_string(const std::string&);
NoisePlacement noise_placement_from_string(const std::string&);
const char* to_string(TargetStage);
const char* to_string(NoisePlacement);

struct PipelineConfig {
    uint64_t master_seed = 42;
    std::size_t duration_samples = 122880;
    TargetStage target_stage = TargetStage::clean;
    NoisePlacement noise_placement = NoisePlacement::per_source;
    std::optional<MixingMode> mode_filter;  // force one mixing mode
};

/// One dataset row: mixture, per-source targets, and how it was made.
struct MixtureSample {
    IqBuffer mixture;
    std::vector<IqBuffer> targets;  // unit power each
    ScenarioDraw scenario;
    SampleMetadata metadata;
};

/// Full construction chain for one multi-source sample: scenario draw,
/// per-source waveform -> TDL channel -> impairment chain -> AWGN, then
/// delay/shift/scale/sum. Pure function of (config, sample_index).
MixtureSample synthesize_sample(const PipelineConfig& cfg, uint64_t sample_index);

/// Single-source companion sample (fixed standard, co-channel, no offsets);
/// same per-source chain as the main corpus.
MixtureSample synthesize_single(const PipelineConfig& cfg, uint64_t sample_index,
                                StandardId std_id);

}  // namespace rfss
