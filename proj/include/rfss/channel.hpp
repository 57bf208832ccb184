// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "rfss/iq_buffer.hpp"
#include "rfss/prng.hpp"

namespace rfss {

enum class TdlType { A = 0, B = 1, C = 2, D = 3, E = 4 };
inline constexpr int kNumTdlTypes = 5;

const char* to_string(TdlType t);
TdlType tdl_from_string(const std::string& name);

/// TR 38.901 tapped-delay-line profile. Delays are the normalized table
/// values (scaled by the drawn delay spread); powers are normalized so the
/// linear tap powers sum to 1. For the Rician profiles (D, E) the first tap
/// combines the LOS and scattered rows and carries the K-factor.
struct TdlProfile {
    TdlType type = TdlType::A;
    std::vector<double> delays_norm;
    std::vector<double> powers_linear;       // sums to 1
    std::optional<double> k_factor_db;       // first tap only (TDL-D/E)

    std::size_t num_taps() const { return delays_norm.size(); }
};

const TdlProfile& tdl_profile(TdlType t);

/// Jakes sum-of-sinusoids parameters for one fading tap.
struct TapFading {
    double power_linear = 1.0;
    int delay_samples = 0;
    static constexpr int kNumSinusoids = 16;
    std::array<double, kNumSinusoids> omega{};  // rad/s per sinusoid
    std::array<double, kNumSinusoids> phase{};
    bool rician = false;
    double k_linear = 0.0;
    double los_omega = 0.0;  // LOS Doppler (0.7 * 2 pi f_d)
    double los_phase = 0.0;
};

/// One drawn channel: profile + per-tap fading processes, evaluated lazily.
struct ChannelRealization {
    TdlProfile profile;
    double doppler_hz = 0.0;
    double delay_spread_s = 0.0;
    double rate_hz = 0.0;
    std::size_t num_samples = 0;
    std::vector<TapFading> taps;

    /// Unit-mean-power complex gain sequence of tap l over the realization.
    /// Evaluated on a coarse grid (>= 2000x the maximum Doppler) and
    /// linearly interpolated; exact when the rate is already low.
    std::vector<cplx> tap_gain_series(std::size_t l) const;
};

/// Draw a channel: profile uniform over the five TDL types, Doppler
/// U[1, 300] Hz, delay spread log-uniform in [30, 300] ns, independent
/// random sinusoid phases per tap.
ChannelRealization draw_channel(RandomStream& stream,
                                std::size_t duration_samples, double rate_hz);

/// y[n] = sum_l g_l[n] x[n - d_l]; output length equals input length,
/// no renormalization.
IqBuffer apply_channel(const IqBuffer& x, const ChannelRealization& ch);

/// Add circularly-symmetric complex Gaussian noise at the given SNR
/// relative to the measured signal power. +inf SNR is the no-noise flag.
IqBuffer add_awgn(const IqBuffer& x, double snr_db, RandomStream& stream);

}  // namespace rfss
