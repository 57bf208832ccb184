// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "rfss/iq_buffer.hpp"
#include "rfss/prng.hpp"
#include "rfss/waveforms.hpp"

namespace rfss {

enum class MixingMode { co_channel = 0, adjacent_channel = 1 };

const char* to_string(MixingMode m);
MixingMode mixing_mode_from_string(const std::string& name);

/// Adjacent-channel carrier offset for each standard. The plan keeps
/// occupied bands non-overlapping inside the +/-15.36 MHz Nyquist span;
/// NR is capped to 368 subcarriers (~11 MHz) in adjacent mode so its
/// band fits alias-free.
double adjacent_offset_hz(StandardId id);
inline constexpr int kNrAdjacentOccupied = 368;

/// One sample's mixing scenario.
struct ScenarioDraw {
    int num_sources = 2;                    // 2..4, weighted draw
    std::vector<StandardId> standards;      // distinct per sample
    MixingMode mode = MixingMode::co_channel;
    std::vector<double> freq_offsets_hz;    // all zero in co-channel
    std::vector<double> powers_db;          // relative to source 0
    std::vector<int> timing_offsets_samples;
    std::vector<double> snr_db;
};

/// Source-count weights (0.49, 0.34, 0.17), uniform standard subset,
/// uniform mode, per-source SNR U[0, 30] dB, power ratios U[-6, +6] dB
/// against source 0, timing offsets U{0..3072} samples.
ScenarioDraw draw_scenario(RandomStream& stream);

/// x[n] * exp(j 2 pi f n / rate). occupied_bw_hz participates in the
/// Nyquist check: |f| + bw/2 must stay inside the band.
IqBuffer frequency_shift(const IqBuffer& x, double f_hz,
                         double occupied_bw_hz = 0.0);

/// Cyclic rotation by the per-source timing offset (length preserving).
IqBuffer cyclic_delay(const IqBuffer& x, int offset_samples);

/// y[n] = sum_i sqrt(P_i) shift(delay(s_i))[n]; inputs must share length
/// and rate. No renormalization of the sum.
IqBuffer assemble(const std::vector<IqBuffer>& sources_impaired,
                  const ScenarioDraw& scenario);

}  // namespace rfss
