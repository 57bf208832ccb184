// SPDX-License-Identifier: Apache-2.0
#include "rfss/pipeline.hpp"

#include <stdexcept>

namespace rfss {

const char* to_string(TargetStage s) {
    return s == TargetStage::clean ? "clean" : "post_channel";
}

const char* to_string(NoisePlacement p) {
    return p == NoisePlacement::per_source ? "per_source" : "mixture";
}

TargetStage target_stage_from_string(const std::string& s) {
    if (s == "clean") return TargetStage::clean;
    if (s == "post_channel") return TargetStage::post_channel;
    throw std::invalid_argument("unknown target stage: " + s);
}

NoisePlacement noise_placement_from_string(const std::string& s) {
    if (s == "per_source") return NoisePlacement::per_source;
    if (s == "mixture") return NoisePlacement::mixture;
    throw std::invalid_argument("unknown noise placement: " + s);
}

namespace {

// Substream used for mixture-level noise when that placement is selected;
// clear of the per-source slots 0..3.
constexpr uint32_t kMixtureNoiseSubstream = 8;

struct SourceResult {
    IqBuffer processed;  // channel + impairments (+ per-source noise)
    IqBuffer target;
    std::string channel_type;
    ImpairmentDraw impairment;
};

SourceResult run_source_chain(const PipelineConfig& cfg, uint64_t index,
                              uint32_t k, StandardId std_id, double snr_db,
                              bool adjacent_mode) {
    const SeedContext bits_ctx{cfg.master_seed, index, StreamTag::bits};
    const SeedContext chan_ctx{cfg.master_seed, index, StreamTag::channel};
    const SeedContext imp_ctx{cfg.master_seed, index, StreamTag::impairment};
    const SeedContext noise_ctx{cfg.master_seed, index, StreamTag::noise};

    RandomStream bits(bits_ctx, k);
    WaveformConfig wcfg;
    wcfg.standard = std_id;
    wcfg.duration_samples = cfg.duration_samples;
    switch (std_id) {
        case StandardId::UMTS:
            wcfg.num_users = 1 + static_cast<int>(bits.uniform_index(4));
            break;
        case StandardId::LTE:
        case StandardId::NR: {
            const int orders[3] = {4, 16, 64};
            wcfg.qam_order = orders[bits.uniform_index(3)];
            if (std_id == StandardId::NR && adjacent_mode)
                wcfg.occupied_subcarriers = kNrAdjacentOccupied;
            break;
        }
        case StandardId::GSM:
            break;
    }

    SourceResult r;
    r.target = generate_waveform(wcfg, bits);

    RandomStream chan(chan_ctx, k);
    const ChannelRealization ch =
        draw_channel(chan, cfg.duration_samples, kCommonRateHz);
    r.channel_type = to_string(ch.profile.type);
    IqBuffer faded = apply_channel(r.target, ch);

    RandomStream imp_draw(imp_ctx, impairment_draw_substream(k));
    r.impairment = draw_impairments(std_id, imp_draw);
    IqBuffer impaired = apply_chain(faded, r.impairment, imp_ctx, k);

    if (cfg.target_stage == TargetStage::post_channel) {
        normalize_power(faded);
        r.target = std::move(faded);
    }

    if (cfg.noise_placement == NoisePlacement::per_source) {
        RandomStream noise(noise_ctx, k);
        r.processed = add_awgn(impaired, snr_db, noise);
    } else {
        r.processed = std::move(impaired);
    }
    return r;
}

MixtureSample finish_sample(const PipelineConfig& cfg, uint64_t index,
                            ScenarioDraw scenario,
                            std::vector<SourceResult> sources) {
    MixtureSample sample;
    std::vector<IqBuffer> processed;
    for (auto& s : sources) {
        processed.push_back(std::move(s.processed));
        sample.targets.push_back(std::move(s.target));
    }
    sample.mixture = assemble(processed, scenario);
    if (cfg.noise_placement == NoisePlacement::mixture) {
        RandomStream noise(SeedContext{cfg.master_seed, index, StreamTag::noise},
                           kMixtureNoiseSubstream);
        sample.mixture = add_awgn(sample.mixture, scenario.snr_db[0], noise);
    }

    SampleMetadata& m = sample.metadata;
    m.num_sources = scenario.num_sources;
    for (const auto& s : scenario.standards) m.standards.push_back(to_string(s));
    m.mixing_mode = to_string(scenario.mode);
    m.snr_db = scenario.snr_db;
    for (const auto& s : sources) m.channel_types.push_back(s.channel_type);
    for (const auto& s : sources) m.impairments.push_back(s.impairment);
    m.powers_db = scenario.powers_db;
    m.freq_offsets_hz = scenario.freq_offsets_hz;
    m.timing_offsets = scenario.timing_offsets_samples;
    m.master_seed = cfg.master_seed;
    m.sample_index = index;
    sample.scenario = std::move(scenario);
    return sample;
}

}  // namespace

MixtureSample synthesize_sample(const PipelineConfig& cfg, uint64_t index) {
    RandomStream scen(SeedContext{cfg.master_seed, index, StreamTag::scenario});
    ScenarioDraw scenario = draw_scenario(scen);
    if (cfg.mode_filter.has_value() && scenario.mode != *cfg.mode_filter) {
        scenario.mode = *cfg.mode_filter;
        for (int i = 0; i < scenario.num_sources; ++i)
            scenario.freq_offsets_hz[static_cast<std::size_t>(i)] =
                scenario.mode == MixingMode::adjacent_channel
                    ? adjacent_offset_hz(scenario.standards[static_cast<std::size_t>(i)])
                    : 0.0;
    }

    std::vector<SourceResult> sources;
    for (int k = 0; k < scenario.num_sources; ++k)
        sources.push_back(run_source_chain(
            cfg, index, static_cast<uint32_t>(k),
            scenario.standards[static_cast<std::size_t>(k)],
            scenario.snr_db[static_cast<std::size_t>(k)],
            scenario.mode == MixingMode::adjacent_channel));
    return finish_sample(cfg, index, std::move(scenario), std::move(sources));
}

MixtureSample synthesize_single(const PipelineConfig& cfg, uint64_t index,
                                StandardId std_id) {
    RandomStream scen(SeedContext{cfg.master_seed, index, StreamTag::scenario});
    ScenarioDraw scenario;
    scenario.num_sources = 1;
    scenario.standards = {std_id};
    scenario.mode = MixingMode::co_channel;
    scenario.freq_offsets_hz = {0.0};
    scenario.powers_db = {0.0};
    scenario.timing_offsets_samples = {0};
    scenario.snr_db = {scen.uniform(0.0, 30.0)};

    std::vector<SourceResult> sources;
    sources.push_back(run_source_chain(cfg, index, 0, std_id, scenario.snr_db[0],
                                       /*adjacent_mode=*/false));
    return finish_sample(cfg, index, std::move(scenario), std::move(sources));
}

}  // namespace rfss
