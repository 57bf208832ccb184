// SPDX-License-Identifier: Apache-2.0
#include "rfss/resample.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace rfss {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kStopbandDb = 85.0;
constexpr double kTransitionFrac = 0.2;  // of the narrower Nyquist band

double bessel_i0(double x) {
    // Series expansion; converges quickly for the beta values used here.
    double sum = 1.0, term = 1.0;
    const double q = x * x / 4.0;
    for (int k = 1; k < 64; ++k) {
        term *= q / (static_cast<double>(k) * k);
        sum += term;
        if (term < 1e-18 * sum) break;
    }
    return sum;
}

}  // namespace

Resampler::Resampler(int up, int down) : up_(up), down_(down) {
    if (up <= 0 || down <= 0)
        throw std::invalid_argument("Resampler: factors must be positive");
    if (up == down) return;  // identity, no filter needed

    const int worst = std::max(up, down);
    const double nyq = kPi / worst;          // at the upsampled rate
    const double trans = kTransitionFrac * nyq;
    const double cutoff = nyq - 0.5 * trans; // stopband edge lands on nyq

    std::size_t n = static_cast<std::size_t>(
        std::ceil((kStopbandDb - 7.95) / (2.285 * trans)));
    if (n % 2 == 0) ++n;  // odd length -> integer group delay
    const double beta = 0.1102 * (kStopbandDb - 8.7);
    const std::size_t d = (n - 1) / 2;

    prototype_.assign(((n + up - 1) / up) * up, 0.0);
    const double inv_i0 = 1.0 / bessel_i0(beta);
    for (std::size_t i = 0; i < n; ++i) {
        const double m = static_cast<double>(i) - static_cast<double>(d);
        const double sinc =
            m == 0.0 ? cutoff / kPi : std::sin(cutoff * m) / (kPi * m);
        const double r = m / static_cast<double>(d);
        const double w = bessel_i0(beta * std::sqrt(std::max(0.0, 1.0 - r * r))) * inv_i0;
        prototype_[i] = static_cast<double>(up) * sinc * w;
    }
    delay_ = d;
    taps_per_phase_ = static_cast<int>(prototype_.size()) / up;
}

IqBuffer Resampler::process(const IqBuffer& x) const {
    if (up_ == down_) return x;
    const std::int64_t n_in = static_cast<std::int64_t>(x.size());
    const std::int64_t n_out = n_in * up_ / down_;
    IqBuffer y;
    y.sample_rate_hz = x.sample_rate_hz * up_ / down_;
    y.samples.resize(static_cast<std::size_t>(n_out));

    const std::int64_t nt = static_cast<std::int64_t>(prototype_.size());
    for (std::int64_t j = 0; j < n_out; ++j) {
        // Index into the conceptual upsampled stream, group delay removed.
        const std::int64_t i = j * down_ + static_cast<std::int64_t>(delay_);
        std::int64_t k = i / up_;
        std::int64_t t = i - k * up_;
        cplx acc = 0.0;
        for (; t < nt && k >= 0; t += up_, --k) {
            if (k < n_in) acc += prototype_[static_cast<std::size_t>(t)] *
                                 x.samples[static_cast<std::size_t>(k)];
        }
        y.samples[static_cast<std::size_t>(j)] = acc;
    }
    return y;
}

IqBuffer resample(const IqBuffer& x, double target_rate_hz) {
    if (x.sample_rate_hz <= 0.0 || target_rate_hz <= 0.0)
        throw std::invalid_argument("resample: rates must be positive");
    const double ratio = target_rate_hz / x.sample_rate_hz;
    int up = 0, down = 0;
    for (int den = 1; den <= 64 && up == 0; ++den) {
        const double num = ratio * den;
        const double rounded = std::round(num);
        if (rounded >= 1.0 && rounded <= 64.0 &&
            std::abs(num - rounded) <= 1e-9 * std::max(1.0, num)) {
            up = static_cast<int>(rounded);
            down = den;
        }
    }
    if (up == 0)
        throw std::invalid_argument(
            "resample: ratio not expressible as a small rational (<= 64/64)");
    if (up == down) {
        IqBuffer y = x;
        y.sample_rate_hz = target_rate_hz;
        return y;
    }
    IqBuffer y = Resampler(up, down).process(x);
    y.sample_rate_hz = target_rate_hz;
    return y;
}

}  // namespace rfss
