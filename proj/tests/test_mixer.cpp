// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <numbers>
#include <set>

#include "rfss/metrics.hpp"
#include "rfss/mixer.hpp"
#include "rfss/pipeline.hpp"

using namespace rfss;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

IqBuffer tone(double freq_hz, std::size_t n) {
    IqBuffer x = IqBuffer::zeros(n, kCommonRateHz);
    for (std::size_t i = 0; i < n; ++i)
        x.samples[i] = std::polar(1.0, kTwoPi * freq_hz * static_cast<double>(i) /
                                           kCommonRateHz);
    return x;
}

RandomStream scenario_stream(uint64_t idx) {
    return RandomStream({42, idx, StreamTag::scenario});
}

}  // namespace

TEST_CASE("scenario statistics match the sampling weights") {
    const int n = 20000;
    int count_by_sources[3] = {0, 0, 0};
    int co = 0;
    std::set<std::set<StandardId>> subsets;
    for (int i = 0; i < n; ++i) {
        RandomStream s = scenario_stream(static_cast<uint64_t>(i));
        const ScenarioDraw d = draw_scenario(s);
        REQUIRE(d.num_sources >= 2);
        REQUIRE(d.num_sources <= 4);
        ++count_by_sources[d.num_sources - 2];
        if (d.mode == MixingMode::co_channel) ++co;
        subsets.insert(std::set<StandardId>(d.standards.begin(), d.standards.end()));

        CHECK(d.standards.size() == static_cast<std::size_t>(d.num_sources));
        CHECK(std::set<StandardId>(d.standards.begin(), d.standards.end()).size() ==
              d.standards.size());
        CHECK(d.freq_offsets_hz.size() == d.standards.size());
        CHECK(d.powers_db.size() == d.standards.size());
        CHECK(d.timing_offsets_samples.size() == d.standards.size());
        CHECK(d.snr_db.size() == d.standards.size());
        CHECK(d.powers_db[0] == 0.0);
        for (std::size_t k = 0; k < d.standards.size(); ++k) {
            CHECK(d.snr_db[k] >= 0.0);
            CHECK(d.snr_db[k] <= 30.0);
            CHECK(d.timing_offsets_samples[k] >= 0);
            CHECK(d.timing_offsets_samples[k] <= 3072);
            if (d.mode == MixingMode::co_channel)
                CHECK(d.freq_offsets_hz[k] == 0.0);
            else
                CHECK(d.freq_offsets_hz[k] == adjacent_offset_hz(d.standards[k]));
            if (k > 0) {
                CHECK(d.powers_db[k] >= -6.0);
                CHECK(d.powers_db[k] <= 6.0);
            }
        }
    }
    CHECK(count_by_sources[0] / static_cast<double>(n) ==
          doctest::Approx(0.49).epsilon(0.03));
    CHECK(count_by_sources[1] / static_cast<double>(n) ==
          doctest::Approx(0.34).epsilon(0.04));
    CHECK(count_by_sources[2] / static_cast<double>(n) ==
          doctest::Approx(0.17).epsilon(0.06));
    CHECK(co / static_cast<double>(n) == doctest::Approx(0.5).epsilon(0.03));
    // All C(4,2) + C(4,3) + C(4,4) = 6 + 4 + 1 subsets appear.
    CHECK(subsets.size() == 11);
}

TEST_CASE("the adjacent-channel offset plan keeps occupied bands separated") {
    struct Band {
        StandardId id;
        double halfwidth_hz;
    };
    // Nominal occupied widths: GSM 0.3 MHz (generous), UMTS 4.685 MHz,
    // LTE 9 MHz, NR capped at 368 subcarriers = 11.04 MHz.
    const Band bands[4] = {{StandardId::GSM, 0.15e6},
                           {StandardId::UMTS, 2.3424e6},
                           {StandardId::LTE, 4.5e6},
                           {StandardId::NR, 5.52e6}};
    for (int i = 0; i < 4; ++i) {
        const double lo = adjacent_offset_hz(bands[i].id) - bands[i].halfwidth_hz;
        const double hi = adjacent_offset_hz(bands[i].id) + bands[i].halfwidth_hz;
        CHECK(lo > -kCommonRateHz / 2);
        CHECK(hi < kCommonRateHz / 2);
        for (int j = i + 1; j < 4; ++j) {
            const double lo2 = adjacent_offset_hz(bands[j].id) - bands[j].halfwidth_hz;
            const double hi2 = adjacent_offset_hz(bands[j].id) + bands[j].halfwidth_hz;
            const double gap = std::max(lo2 - hi, lo - hi2);
            CHECK(gap >= 100e3);
        }
    }
}

TEST_CASE("frequency shift honors the group property and the Nyquist guard") {
    const IqBuffer x = tone(0.96e6, 8192);
    const IqBuffer same = frequency_shift(x, 0.0);
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(same[i] == x[i]);

    const IqBuffer there = frequency_shift(x, -7.5e6);
    const IqBuffer back = frequency_shift(there, 7.5e6);
    double err = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) err += std::norm(back[i] - x[i]);
    CHECK(std::sqrt(err / static_cast<double>(x.size())) < 1e-12);

    CHECK_THROWS_AS(frequency_shift(x, 15.3e6, 1e6), std::invalid_argument);
}

TEST_CASE("a shifted narrowband signal lands at the requested offset") {
    // Narrowband stand-in centered at 0 with a slow random phase walk.
    RandomStream s({4, 0, StreamTag::bits});
    IqBuffer x = IqBuffer::zeros(65536, kCommonRateHz);
    double phi = 0.0;
    for (auto& v : x.samples) {
        phi += 0.01 * s.normal();
        v = std::polar(1.0, phi);
    }
    const IqBuffer y = frequency_shift(x, -12e6);
    const PsdEstimate psd = welch_psd(y, 4096);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < psd.psd.size(); ++i) {
        num += psd.freq_hz[i] * psd.psd[i];
        den += psd.psd[i];
    }
    CHECK(num / den == doctest::Approx(-12e6).epsilon(50e3 / 12e6));
}

TEST_CASE("assemble reduces to the single source and adds powers") {
    const std::size_t n = 8192;
    ScenarioDraw sc;
    sc.num_sources = 1;
    sc.standards = {StandardId::GSM};
    sc.mode = MixingMode::co_channel;
    sc.freq_offsets_hz = {0.0};
    sc.powers_db = {0.0};
    sc.timing_offsets_samples = {0};
    sc.snr_db = {30.0};
    const IqBuffer src = tone(0.48e6, n);
    const IqBuffer mix = assemble({src}, sc);
    for (std::size_t i = 0; i < n; ++i) CHECK(mix[i] == src[i]);

    ScenarioDraw sc2 = sc;
    sc2.num_sources = 2;
    sc2.standards = {StandardId::GSM, StandardId::LTE};
    sc2.freq_offsets_hz = {0.0, 0.0};
    sc2.powers_db = {0.0, 0.0};
    sc2.timing_offsets_samples = {0, 0};
    sc2.snr_db = {30.0, 30.0};
    // Orthogonal tones: whole numbers of cycles in the window.
    const IqBuffer a = tone(0.48e6, n);
    const IqBuffer b = tone(3.84e6, n);
    const IqBuffer mix2 = assemble({a, b}, sc2);
    CHECK(mean_power(mix2) ==
          doctest::Approx(mean_power(a) + mean_power(b)).epsilon(1e-6));

    CHECK_THROWS_AS(assemble({a}, sc2), std::invalid_argument);
}

TEST_CASE("assemble equals the sum of its per-source stages bitwise") {
    RandomStream s = scenario_stream(123);
    ScenarioDraw sc = draw_scenario(s);
    std::vector<IqBuffer> sources;
    for (int k = 0; k < sc.num_sources; ++k)
        sources.push_back(tone(0.24e6 * (k + 1), 4096));

    const IqBuffer mix = assemble(sources, sc);
    IqBuffer manual = IqBuffer::zeros(4096, kCommonRateHz);
    for (int k = 0; k < sc.num_sources; ++k) {
        IqBuffer stage = cyclic_delay(sources[static_cast<std::size_t>(k)],
                                      sc.timing_offsets_samples[static_cast<std::size_t>(k)]);
        stage = frequency_shift(stage, sc.freq_offsets_hz[static_cast<std::size_t>(k)]);
        const double g = std::pow(10.0, sc.powers_db[static_cast<std::size_t>(k)] / 20.0);
        for (std::size_t i = 0; i < manual.size(); ++i)
            manual.samples[i] += g * stage.samples[i];
    }
    for (std::size_t i = 0; i < manual.size(); ++i) CHECK(mix[i] == manual[i]);
}

TEST_CASE("cyclic delay preserves power and content") {
    const IqBuffer x = tone(0.96e6, 4096);
    const IqBuffer y = cyclic_delay(x, 137);
    CHECK(mean_power(y) == doctest::Approx(mean_power(x)).epsilon(1e-12));
    for (std::size_t i = 0; i < x.size(); ++i)
        CHECK(y.samples[(i + 137) % x.size()] == x.samples[i]);
}

// ---- full pipeline -------------------------------------------------------

TEST_CASE("synthesized samples carry consistent targets and metadata") {
    PipelineConfig cfg;
    cfg.master_seed = 42;
    cfg.duration_samples = 122880;
    const MixtureSample sample = synthesize_sample(cfg, 3);

    CHECK(sample.mixture.size() == 122880);
    CHECK(all_finite(sample.mixture));
    CHECK(sample.targets.size() == static_cast<std::size_t>(sample.scenario.num_sources));
    for (const auto& t : sample.targets) {
        CHECK(t.size() == 122880);
        CHECK(mean_power(t) == doctest::Approx(1.0).epsilon(1e-6));
    }
    const SampleMetadata& m = sample.metadata;
    CHECK(m.num_sources == sample.scenario.num_sources);
    CHECK(m.standards.size() == static_cast<std::size_t>(m.num_sources));
    CHECK(m.channel_types.size() == static_cast<std::size_t>(m.num_sources));
    CHECK(m.impairments.size() == static_cast<std::size_t>(m.num_sources));
    CHECK(m.master_seed == 42);
    CHECK(m.sample_index == 3);

    // Bitwise determinism of the full chain.
    const MixtureSample again = synthesize_sample(cfg, 3);
    REQUIRE(again.mixture.size() == sample.mixture.size());
    for (std::size_t i = 0; i < sample.mixture.size(); ++i)
        CHECK(again.mixture[i] == sample.mixture[i]);
}

TEST_CASE("stored targets reproduce bitwise from the same seed context") {
    PipelineConfig cfg;
    cfg.master_seed = 7;
    cfg.duration_samples = 61440;
    const MixtureSample sample = synthesize_sample(cfg, 11);

    for (int k = 0; k < sample.scenario.num_sources; ++k) {
        RandomStream bits(SeedContext{7, 11, StreamTag::bits},
                          static_cast<uint32_t>(k));
        WaveformConfig wcfg;
        wcfg.standard = sample.scenario.standards[static_cast<std::size_t>(k)];
        wcfg.duration_samples = 61440;
        switch (wcfg.standard) {
            case StandardId::UMTS:
                wcfg.num_users = 1 + static_cast<int>(bits.uniform_index(4));
                break;
            case StandardId::LTE:
            case StandardId::NR: {
                const int orders[3] = {4, 16, 64};
                wcfg.qam_order = orders[bits.uniform_index(3)];
                if (wcfg.standard == StandardId::NR &&
                    sample.scenario.mode == MixingMode::adjacent_channel)
                    wcfg.occupied_subcarriers = kNrAdjacentOccupied;
                break;
            }
            default:
                break;
        }
        const IqBuffer regen = generate_waveform(wcfg, bits);
        const IqBuffer& stored = sample.targets[static_cast<std::size_t>(k)];
        REQUIRE(regen.size() == stored.size());
        for (std::size_t i = 0; i < regen.size(); ++i)
            CHECK(regen[i] == stored[i]);
    }
}

TEST_CASE("mode filter forces the mixing mode without disturbing draws") {
    PipelineConfig cfg;
    cfg.master_seed = 42;
    cfg.duration_samples = 30720;
    cfg.mode_filter = MixingMode::co_channel;
    for (uint64_t idx = 0; idx < 4; ++idx) {
        const MixtureSample s = synthesize_sample(cfg, idx);
        CHECK(s.scenario.mode == MixingMode::co_channel);
        for (const double f : s.scenario.freq_offsets_hz) CHECK(f == 0.0);
    }
}

TEST_CASE("single-source companion samples use the fixed standard") {
    PipelineConfig cfg;
    cfg.master_seed = 42;
    cfg.duration_samples = 30720;
    const MixtureSample s = synthesize_single(cfg, 0, StandardId::UMTS);
    CHECK(s.scenario.num_sources == 1);
    CHECK(s.metadata.standards == std::vector<std::string>{"UMTS"});
    CHECK(s.metadata.mixing_mode == "co_channel");
    CHECK(s.targets.size() == 1);
    CHECK(mean_power(s.targets[0]) == doctest::Approx(1.0).epsilon(1e-6));
}
