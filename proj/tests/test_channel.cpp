// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "rfss/channel.hpp"
#include "rfss/fft.hpp"

using namespace rfss;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

RandomStream stream_for(uint64_t idx) {
    return RandomStream({42, idx, StreamTag::channel});
}

// Static unit-gain tap built as a pure LOS component.
TapFading static_tap(double power, int delay) {
    TapFading t;
    t.power_linear = power;
    t.delay_samples = delay;
    t.rician = true;
    t.k_linear = 1e30;
    t.los_omega = 0.0;
    t.los_phase = 0.0;
    return t;
}

ChannelRealization static_channel(std::vector<TapFading> taps,
                                  std::size_t n, double rate) {
    ChannelRealization ch;
    ch.profile = tdl_profile(TdlType::A);
    ch.rate_hz = rate;
    ch.num_samples = n;
    ch.taps = std::move(taps);
    return ch;
}

IqBuffer white_noise(std::size_t n, double rate, uint64_t idx) {
    RandomStream s({7, idx, StreamTag::noise});
    IqBuffer x = IqBuffer::zeros(n, rate);
    for (auto& v : x.samples) v = s.complex_normal();
    return x;
}

IqBuffer tone(double freq_hz, double rate, std::size_t n) {
    IqBuffer x = IqBuffer::zeros(n, rate);
    for (std::size_t i = 0; i < n; ++i)
        x.samples[i] = std::polar(1.0, kTwoPi * freq_hz * static_cast<double>(i) / rate);
    return x;
}

// Rician K estimate from the envelope-squared moments:
// v = var(r^2)/mean(r^2)^2, K = ((1-v) + sqrt(1-v)) / v.
double moment_k_factor(double m2, double m4) {
    const double v = (m4 - m2 * m2) / (m2 * m2);
    if (v <= 0.0) return 1e12;
    const double arg = std::max(0.0, 1.0 - v);
    return ((1.0 - v) + std::sqrt(arg)) / v;
}

}  // namespace

TEST_CASE("tdl profiles are normalized and carry the documented K-factors") {
    for (int i = 0; i < kNumTdlTypes; ++i) {
        const TdlProfile& p = tdl_profile(static_cast<TdlType>(i));
        double total = 0.0;
        for (const double w : p.powers_linear) total += w;
        CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(p.num_taps() >= 13);
        CHECK(p.delays_norm[0] == 0.0);
    }
    CHECK(!tdl_profile(TdlType::A).k_factor_db.has_value());
    CHECK(tdl_profile(TdlType::D).k_factor_db.value() == doctest::Approx(13.3));
    CHECK(tdl_profile(TdlType::E).k_factor_db.value() == doctest::Approx(22.0));
}

TEST_CASE("profile draw is uniform over the five TDL types") {
    int counts[kNumTdlTypes] = {0};
    const int n = 10000;
    for (int i = 0; i < n; ++i) {
        RandomStream s = stream_for(static_cast<uint64_t>(i));
        const ChannelRealization ch = draw_channel(s, 16, 30.72e6);
        ++counts[static_cast<int>(ch.profile.type)];
        CHECK(ch.doppler_hz >= 1.0);
        CHECK(ch.doppler_hz <= 300.0);
        CHECK(ch.delay_spread_s >= 30e-9);
        CHECK(ch.delay_spread_s <= 300e-9);
    }
    for (const int c : counts)
        CHECK(std::abs(c / static_cast<double>(n) - 0.2) <= 0.02);
}

TEST_CASE("single static unit tap with zero delay is the identity") {
    const IqBuffer x = white_noise(4096, 30.72e6, 1);
    const auto ch = static_channel({static_tap(1.0, 0)}, x.size(), x.sample_rate_hz);
    const IqBuffer y = apply_channel(x, ch);
    REQUIRE(y.size() == x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        CHECK(std::abs(y[i] - x[i]) < 1e-12);
}

TEST_CASE("two equal static taps put a spectral null at rate/(2D)") {
    const int delay = 8;
    const double rate = 30.72e6;
    const auto ch = static_channel({static_tap(0.5, 0), static_tap(0.5, delay)},
                                   16384, rate);
    const double f_null = rate / (2.0 * delay);
    const double f_peak = rate / delay;

    const IqBuffer xn = tone(f_null, rate, 16384);
    const IqBuffer yn = apply_channel(xn, ch);
    double p_null = 0.0;
    for (std::size_t i = static_cast<std::size_t>(delay); i < yn.size(); ++i)
        p_null += std::norm(yn[i]);
    p_null /= static_cast<double>(yn.size() - delay);
    CHECK(p_null < 1e-9);

    const IqBuffer xp = tone(f_peak, rate, 16384);
    const IqBuffer yp = apply_channel(xp, ch);
    double p_peak = 0.0;
    for (std::size_t i = static_cast<std::size_t>(delay); i < yp.size(); ++i)
        p_peak += std::norm(yp[i]);
    p_peak /= static_cast<double>(yp.size() - delay);
    CHECK(p_peak == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("apply_channel is linear in the input") {
    RandomStream s = stream_for(77);
    const ChannelRealization ch = draw_channel(s, 4096, 30.72e6);
    const IqBuffer x = white_noise(4096, 30.72e6, 2);
    const IqBuffer y = white_noise(4096, 30.72e6, 3);
    const cplx a{0.8, -1.1}, b{2.0, 0.4};
    IqBuffer combo = IqBuffer::zeros(4096, 30.72e6);
    for (std::size_t i = 0; i < combo.size(); ++i)
        combo.samples[i] = a * x[i] + b * y[i];
    const IqBuffer fx = apply_channel(x, ch);
    const IqBuffer fy = apply_channel(y, ch);
    const IqBuffer fc = apply_channel(combo, ch);
    double err = 0.0, ref = 0.0;
    for (std::size_t i = 0; i < combo.size(); ++i) {
        err += std::norm(fc[i] - (a * fx[i] + b * fy[i]));
        ref += std::norm(fc[i]);
    }
    CHECK(std::sqrt(err / ref) < 1e-9);
}

TEST_CASE("long-run faded power averages back to the profile power") {
    double mean = 0.0;
    const int trials = 6;
    for (int t = 0; t < trials; ++t) {
        RandomStream s = stream_for(static_cast<uint64_t>(200 + t));
        // 2 s at 50 kHz covers many fading cycles at any drawn Doppler.
        const std::size_t n = 100000;
        const ChannelRealization ch = draw_channel(s, n, 50e3);
        const IqBuffer x = white_noise(n, 50e3, static_cast<uint64_t>(10 + t));
        const IqBuffer y = apply_channel(x, ch);
        mean += mean_power(y) / mean_power(x);
    }
    mean /= trials;
    CHECK(mean > 0.75);
    CHECK(mean < 1.25);
}

TEST_CASE("TDL-D first tap is Rician with K near 13.3 dB") {
    double m2 = 0.0, m4 = 0.0;
    std::size_t count = 0;
    int found = 0;
    for (uint64_t idx = 0; found < 10 && idx < 200; ++idx) {
        RandomStream s = stream_for(1000 + idx);
        // 20 s at 2 kHz: hundreds of fading cycles at any drawn Doppler.
        const ChannelRealization ch = draw_channel(s, 40000, 2000.0);
        if (ch.profile.type != TdlType::D) continue;
        ++found;
        const auto g = ch.tap_gain_series(0);
        for (const cplx& v : g) {
            const double p = std::norm(v);
            m2 += p;
            m4 += p * p;
            ++count;
        }
    }
    REQUIRE(found == 10);
    m2 /= static_cast<double>(count);
    m4 /= static_cast<double>(count);
    const double k_db = 10.0 * std::log10(moment_k_factor(m2, m4));
    CHECK(k_db == doctest::Approx(13.3).epsilon(1.0 / 13.3));
}

TEST_CASE("jakes tap autocorrelation tracks J0(2 pi fd tau)") {
    // First zero of J0 at 2.4048 -> tau = 3.83 / (2 pi fd) with fd = 100 Hz.
    const double fd = 100.0;
    const double rate = 20e3;
    const std::size_t n = 40000;  // 2 s
    double first_zero_sum = 0.0;
    const int trials = 6;
    for (int t = 0; t < trials; ++t) {
        RandomStream s({5, static_cast<uint64_t>(t), StreamTag::channel});
        ChannelRealization ch;
        ch.profile = tdl_profile(TdlType::A);
        ch.rate_hz = rate;
        ch.num_samples = n;
        TapFading tap;
        tap.power_linear = 1.0;
        tap.delay_samples = 0;
        const double rot = s.uniform();
        for (int i = 0; i < TapFading::kNumSinusoids; ++i) {
            const double alpha = kTwoPi * (i + rot) / TapFading::kNumSinusoids;
            tap.omega[i] = kTwoPi * fd * std::cos(alpha);
            tap.phase[i] = s.uniform(0.0, kTwoPi);
        }
        ch.taps = {tap};
        const auto g = ch.tap_gain_series(0);

        const std::size_t max_lag = 300;  // 15 ms
        double prev = 1.0;
        for (std::size_t lag = 1; lag < max_lag; ++lag) {
            cplx acc = 0.0;
            for (std::size_t i = 0; i + lag < n; ++i)
                acc += g[i + lag] * std::conj(g[i]);
            const double r = acc.real() / static_cast<double>(n - lag);
            if (prev > 0.0 && r <= 0.0) {
                const double frac = prev / (prev - r);
                first_zero_sum += (static_cast<double>(lag - 1) + frac) / rate;
                break;
            }
            prev = r;
        }
    }
    const double first_zero = first_zero_sum / trials;
    const double expected = 3.8317 / (kTwoPi * fd);
    CHECK(first_zero == doctest::Approx(expected).epsilon(0.10));
}

TEST_CASE("tap gain spectrum stays inside the Doppler bandwidth") {
    RandomStream s = stream_for(321);
    const std::size_t n = 32768;
    const double rate = 4000.0;
    const ChannelRealization ch = draw_channel(s, n, rate);
    const auto g = ch.tap_gain_series(1);  // a Rayleigh tap on every profile
    std::vector<cplx> spec(g.begin(), g.end());
    Fft fft(n);
    fft.forward(spec);
    double inside = 0.0, outside = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double f = static_cast<double>(i) * rate / static_cast<double>(n);
        if (f > rate / 2) f -= rate;
        if (std::abs(f) <= ch.doppler_hz * 1.05)
            inside += std::norm(spec[i]);
        else
            outside += std::norm(spec[i]);
    }
    CHECK(outside / (inside + outside) <= 0.05);
}

TEST_CASE("awgn at 0 dB doubles the power and the flag disables it") {
    const IqBuffer x = white_noise(122880, 30.72e6, 9);
    RandomStream s({42, 0, StreamTag::noise});
    const IqBuffer y = add_awgn(x, 0.0, s);
    double noise = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) noise += std::norm(y[i] - x[i]);
    noise /= static_cast<double>(x.size());
    CHECK(noise == doctest::Approx(mean_power(x)).epsilon(0.02));

    RandomStream s2({42, 0, StreamTag::noise});
    const IqBuffer z = add_awgn(x, INFINITY, s2);
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(z[i] == x[i]);
}

TEST_CASE("awgn at 30 dB measures back via the residual method") {
    const IqBuffer x = white_noise(122880, 30.72e6, 10);
    RandomStream s({42, 1, StreamTag::noise});
    const IqBuffer y = add_awgn(x, 30.0, s);
    double noise = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) noise += std::norm(y[i] - x[i]);
    noise /= static_cast<double>(x.size());
    const double snr_est = 10.0 * std::log10(mean_power(x) / noise);
    CHECK(snr_est == doctest::Approx(30.0).epsilon(0.2 / 30.0));
}
