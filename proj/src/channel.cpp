// SPDX-License-Identifier: Apache-2.0
#include "rfss/channel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace rfss {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kMinDopplerHz = 1.0;
constexpr double kMaxDopplerHz = 300.0;
constexpr double kMinDelaySpreadS = 30e-9;
constexpr double kMaxDelaySpreadS = 300e-9;
// Fading evaluated at >= this rate and interpolated; far above 2 x 300 Hz.
constexpr double kFadingGridRateHz = 614400.0;

struct TdlRow {
    double delay;
    double power_db;
};

// TR 38.901 Tables 7.7.2-1..5 (normalized delays, powers in dB). For TDL-D
// and TDL-E the table's two co-located first rows (LOS + scattered) are
// combined into one Rician tap with the stated K-factor.
const std::vector<TdlRow>& tdl_rows(TdlType t) {
    static const std::vector<TdlRow> a = {
        {0.0000, -13.4}, {0.3819, 0.0},   {0.4025, -2.2},  {0.5868, -4.0},
        {0.4610, -6.0},  {0.5375, -8.2},  {0.6708, -9.9},  {0.5750, -10.5},
        {0.7618, -7.5},  {1.5375, -15.9}, {1.8978, -6.6},  {2.2242, -16.7},
        {2.1718, -12.4}, {2.4942, -15.2}, {2.5119, -10.8}, {3.0582, -11.3},
        {4.0810, -12.7}, {4.4579, -16.2}, {4.5695, -18.3}, {4.7966, -18.9},
        {5.0066, -16.6}, {5.3043, -19.9}, {9.6586, -29.7}};
    static const std::vector<TdlRow> b = {
        {0.0000, 0.0},   {0.1072, -2.2},  {0.2155, -4.0},  {0.2095, -3.2},
        {0.2870, -9.8},  {0.2986, -1.2},  {0.3752, -3.4},  {0.5055, -5.2},
        {0.3681, -7.6},  {0.3697, -3.0},  {0.5700, -8.9},  {0.5283, -9.0},
        {1.1021, -4.8},  {1.2756, -5.7},  {1.5474, -7.5},  {1.7842, -1.9},
        {2.0169, -7.6},  {2.8294, -12.2}, {3.0219, -9.8},  {3.6187, -11.4},
        {4.1067, -14.9}, {4.2790, -9.2},  {4.7834, -11.3}};
    static const std::vector<TdlRow> c = {
        {0.0000, -4.4},  {0.2099, -1.2},  {0.2219, -3.5},  {0.2329, -5.2},
        {0.2176, -2.5},  {0.6366, 0.0},   {0.6448, -2.2},  {0.6560, -3.9},
        {0.6584, -7.4},  {0.7935, -7.1},  {0.8213, -10.7}, {0.9336, -11.1},
        {1.2285, -5.1},  {1.3083, -6.8},  {2.1704, -8.7},  {2.7105, -13.2},
        {4.2589, -13.9}, {4.6003, -13.9}, {5.4902, -15.8}, {5.6077, -17.1},
        {6.3065, -16.0}, {6.6374, -15.7}, {7.0427, -21.6}, {8.6523, -22.8}};
    // First row is the combined Rician tap (LOS -0.2 dB + scattered -13.5 dB).
    static const std::vector<TdlRow> d = {
        {0.0000, -0.00147},  // 10*log10(10^-0.02 + 10^-1.35)
        {0.0350, -18.8}, {0.6120, -21.0}, {1.3630, -22.8}, {1.4050, -17.9},
        {1.8040, -20.1}, {2.5960, -21.9}, {1.7750, -22.9}, {4.0420, -27.8},
        {7.9370, -23.6}, {9.4240, -24.8}, {9.7080, -30.0}, {12.525, -27.7}};
    // Combined first tap: LOS -0.03 dB + scattered -22.03 dB.
    static const std::vector<TdlRow> e = {
        {0.0000, -0.00257},
        {0.5133, -15.8}, {0.5440, -18.1}, {0.5630, -19.8}, {0.5440, -22.9},
        {0.7112, -22.4}, {1.9092, -18.6}, {1.9293, -20.8}, {1.9589, -22.6},
        {2.6426, -22.3}, {3.7136, -25.6}, {5.4524, -20.2}, {12.0034, -29.8},
        {20.6519, -29.2}};
    switch (t) {
        case TdlType::A: return a;
        case TdlType::B: return b;
        case TdlType::C: return c;
        case TdlType::D: return d;
        case TdlType::E: return e;
    }
    throw std::invalid_argument("tdl_rows: bad type");
}

TdlProfile make_profile(TdlType t) {
    const auto& rows = tdl_rows(t);
    TdlProfile p;
    p.type = t;
    double total = 0.0;
    for (const auto& r : rows) {
        p.delays_norm.push_back(r.delay);
        const double lin = std::pow(10.0, r.power_db / 10.0);
        p.powers_linear.push_back(lin);
        total += lin;
    }
    for (double& v : p.powers_linear) v /= total;
    if (t == TdlType::D) p.k_factor_db = 13.3;
    if (t == TdlType::E) p.k_factor_db = 22.0;
    return p;
}

}  // namespace

const char* to_string(TdlType t) {
    switch (t) {
        case TdlType::A: return "TDL-A";
        case TdlType::B: return "TDL-B";
        case TdlType::C: return "TDL-C";
        case TdlType::D: return "TDL-D";
        case TdlType::E: return "TDL-E";
    }
    return "?";
}

TdlType tdl_from_string(const std::string& name) {
    for (int i = 0; i < kNumTdlTypes; ++i)
        if (name == to_string(static_cast<TdlType>(i)))
            return static_cast<TdlType>(i);
    throw std::invalid_argument("unknown TDL type: " + name);
}

const TdlProfile& tdl_profile(TdlType t) {
    static const TdlProfile profiles[kNumTdlTypes] = {
        make_profile(TdlType::A), make_profile(TdlType::B),
        make_profile(TdlType::C), make_profile(TdlType::D),
        make_profile(TdlType::E)};
    return profiles[static_cast<int>(t)];
}

ChannelRealization draw_channel(RandomStream& stream,
                                std::size_t duration_samples, double rate_hz) {
    if (duration_samples == 0 || rate_hz <= 0.0)
        throw std::invalid_argument("draw_channel: bad duration or rate");

    ChannelRealization ch;
    ch.profile = tdl_profile(static_cast<TdlType>(stream.uniform_index(kNumTdlTypes)));
    ch.doppler_hz = stream.uniform(kMinDopplerHz, kMaxDopplerHz);
    ch.delay_spread_s = stream.log_uniform(kMinDelaySpreadS, kMaxDelaySpreadS);
    ch.rate_hz = rate_hz;
    ch.num_samples = duration_samples;

    const double fd = ch.doppler_hz;
    ch.taps.resize(ch.profile.num_taps());
    for (std::size_t l = 0; l < ch.taps.size(); ++l) {
        TapFading& tap = ch.taps[l];
        tap.power_linear = ch.profile.powers_linear[l];
        tap.delay_samples = static_cast<int>(
            std::lround(ch.profile.delays_norm[l] * ch.delay_spread_s * rate_hz));
        // Evenly spaced arrival angles with a random comb rotation per tap.
        const double rot = stream.uniform();
        for (int n = 0; n < TapFading::kNumSinusoids; ++n) {
            const double alpha =
                kTwoPi * (static_cast<double>(n) + rot) / TapFading::kNumSinusoids;
            tap.omega[n] = kTwoPi * fd * std::cos(alpha);
            tap.phase[n] = stream.uniform(0.0, kTwoPi);
        }
        if (l == 0 && ch.profile.k_factor_db.has_value()) {
            tap.rician = true;
            tap.k_linear = std::pow(10.0, *ch.profile.k_factor_db / 10.0);
            tap.los_omega = kTwoPi * 0.7 * fd;  // TR 38.901 LOS Doppler
            tap.los_phase = stream.uniform(0.0, kTwoPi);
        }
    }
    return ch;
}

std::vector<cplx> ChannelRealization::tap_gain_series(std::size_t l) const {
    const TapFading& tap = taps.at(l);
    const std::size_t step = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(rate_hz / kFadingGridRateHz)));
    const std::size_t n_grid = num_samples / step + 2;

    const double scatter_scale =
        tap.rician ? std::sqrt(1.0 / (tap.k_linear + 1.0)) : 1.0;
    const double amp = scatter_scale / std::sqrt(double(TapFading::kNumSinusoids));
    const double los_amp =
        tap.rician ? std::sqrt(tap.k_linear / (tap.k_linear + 1.0)) : 0.0;

    std::vector<cplx> grid(n_grid);
    for (std::size_t g = 0; g < n_grid; ++g) {
        const double t = static_cast<double>(g * step) / rate_hz;
        cplx acc = 0.0;
        for (int n = 0; n < TapFading::kNumSinusoids; ++n) {
            const double a = tap.omega[n] * t + tap.phase[n];
            acc += cplx{std::cos(a), std::sin(a)};
        }
        acc *= amp;
        if (tap.rician) {
            const double a = tap.los_omega * t + tap.los_phase;
            acc += los_amp * cplx{std::cos(a), std::sin(a)};
        }
        grid[g] = acc;
    }

    std::vector<cplx> series(num_samples);
    if (step == 1) {
        std::copy(grid.begin(), grid.begin() + static_cast<std::ptrdiff_t>(num_samples),
                  series.begin());
        return series;
    }
    for (std::size_t n = 0; n < num_samples; ++n) {
        const std::size_t g = n / step;
        const double frac = static_cast<double>(n - g * step) / static_cast<double>(step);
        series[n] = grid[g] * (1.0 - frac) + grid[g + 1] * frac;
    }
    return series;
}

IqBuffer apply_channel(const IqBuffer& x, const ChannelRealization& ch) {
    if (ch.num_samples < x.size())
        throw std::invalid_argument("apply_channel: realization shorter than signal");
    IqBuffer y = IqBuffer::zeros(x.size(), x.sample_rate_hz);
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(x.size());
    for (std::size_t l = 0; l < ch.taps.size(); ++l) {
        const std::vector<cplx> gain = ch.tap_gain_series(l);
        const double w = std::sqrt(ch.taps[l].power_linear);
        const std::ptrdiff_t d = ch.taps[l].delay_samples;
        for (std::ptrdiff_t i = d; i < n; ++i)
            y.samples[static_cast<std::size_t>(i)] +=
                w * gain[static_cast<std::size_t>(i)] *
                x.samples[static_cast<std::size_t>(i - d)];
    }
    return y;
}

IqBuffer add_awgn(const IqBuffer& x, double snr_db, RandomStream& stream) {
    if (x.empty()) throw std::invalid_argument("add_awgn: empty buffer");
    if (std::isinf(snr_db) && snr_db > 0.0) return x;  // no-noise flag
    const double signal_power = mean_power(x);
    const double noise_power = signal_power / std::pow(10.0, snr_db / 10.0);
    const double s = std::sqrt(noise_power);
    IqBuffer y = x;
    for (cplx& v : y.samples) v += s * stream.complex_normal();
    return y;
}

}  // namespace rfss
