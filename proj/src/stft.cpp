// SPDX-License-Identifier: Apache-2.0
#include "rfss/stft.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "rfss/fft.hpp"

namespace rfss {

namespace {

std::vector<double> hann(std::size_t n) {
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i)
        w[i] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi *
                                     static_cast<double>(i) /
                                     static_cast<double>(n)));
    return w;
}

}  // namespace

StftGrid stft(const IqBuffer& x, int fft_size, int hop) {
    if (fft_size <= 0 || hop <= 0 || hop > fft_size)
        throw std::invalid_argument("stft: bad frame/hop");
    if (x.size() < static_cast<std::size_t>(fft_size))
        throw std::invalid_argument("stft: buffer shorter than one frame");
    const std::size_t n_frames =
        (x.size() - static_cast<std::size_t>(fft_size)) /
            static_cast<std::size_t>(hop) + 1;

    const Fft fft(static_cast<std::size_t>(fft_size));
    const auto window = hann(static_cast<std::size_t>(fft_size));

    StftGrid g;
    g.fft_size = fft_size;
    g.hop = hop;
    g.sample_rate_hz = x.sample_rate_hz;
    g.frames.resize(n_frames);
    for (std::size_t f = 0; f < n_frames; ++f) {
        auto& frame = g.frames[f];
        frame.resize(static_cast<std::size_t>(fft_size));
        const std::size_t start = f * static_cast<std::size_t>(hop);
        for (std::size_t i = 0; i < static_cast<std::size_t>(fft_size); ++i)
            frame[i] = x.samples[start + i] * window[i];
        fft.forward(frame);
    }
    return g;
}

IqBuffer istft(const StftGrid& grid, std::size_t length) {
    const std::size_t n = static_cast<std::size_t>(grid.fft_size);
    const std::size_t hop = static_cast<std::size_t>(grid.hop);
    const Fft fft(n);
    const auto window = hann(n);

    const std::size_t span =
        grid.frames.empty() ? length : (grid.num_frames() - 1) * hop + n;
    std::vector<cplx> acc(std::max(span, length), 0.0);
    std::vector<double> weight(acc.size(), 0.0);

    std::vector<cplx> frame;
    for (std::size_t f = 0; f < grid.num_frames(); ++f) {
        frame = grid.frames[f];
        fft.inverse(frame);
        const std::size_t start = f * hop;
        for (std::size_t i = 0; i < n; ++i) {
            acc[start + i] += window[i] * frame[i];
            weight[start + i] += window[i] * window[i];
        }
    }
    // Masked grids are not consistent STFTs; flooring the synthesis weight
    // keeps the near-zero window tails at the buffer edges from amplifying
    // reconstruction error. Interior samples sit at the full COLA weight.
    double w_max = 0.0;
    for (const double w : weight) w_max = std::max(w_max, w);
    const double w_floor = 0.05 * w_max;

    IqBuffer out = IqBuffer::zeros(length, grid.sample_rate_hz);
    for (std::size_t i = 0; i < length; ++i)
        out.samples[i] = weight[i] > 0.0
                             ? acc[i] / std::max(weight[i], w_floor)
                             : cplx{0.0, 0.0};
    return out;
}

}  // namespace rfss
