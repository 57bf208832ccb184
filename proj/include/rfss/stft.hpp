// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "rfss/iq_buffer.hpp"

namespace rfss {

/// Hann-windowed STFT frames. With the default 1024/256 grid the analysis
/// windows satisfy constant overlap-add, so istft(stft(x)) reproduces the
/// interior of x to floating-point accuracy.
struct StftGrid {
    std::vector<std::vector<cplx>> frames;  // [frame][bin]
    int fft_size = 1024;
    int hop = 256;
    double sample_rate_hz = 0.0;

    std::size_t num_frames() const { return frames.size(); }
};

StftGrid stft(const IqBuffer& x, int fft_size = 1024, int hop = 256);

/// Weighted overlap-add inverse; output trimmed/padded to `length`.
IqBuffer istft(const StftGrid& grid, std::size_t length);

}  // namespace rfss
