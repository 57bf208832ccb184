// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace rfss {

/// Radix-2 complex FFT for power-of-two sizes. Twiddles are precomputed at
/// construction; transforms are const and safe to call from many threads.
///
/// Conventions: forward() applies no scaling, inverse() scales by 1/N, so
/// inverse(forward(x)) == x.
class Fft {
public:
    explicit Fft(std::size_t n);

    std::size_t size() const { return n_; }

    void forward(std::vector<std::complex<double>>& data) const;
    void inverse(std::vector<std::complex<double>>& data) const;

    std::vector<std::complex<double>> forward_copy(
        const std::vector<std::complex<double>>& data) const;

private:
    void transform(std::vector<std::complex<double>>& data, bool inverse) const;

    std::size_t n_;
    std::vector<std::size_t> bit_reverse_;
    std::vector<std::complex<double>> twiddles_;  // e^{-j 2 pi k / n}, k < n/2
};

/// Rotate a spectrum so index 0 maps to -n/2 (for plotting/PSD reporting).
template <typename T>
std::vector<T> fft_shift(const std::vector<T>& x) {
    std::vector<T> out(x.size());
    const std::size_t half = (x.size() + 1) / 2;
    for (std::size_t i = 0; i < x.size(); ++i)
        out[i] = x[(i + half) % x.size()];
    return out;
}

}  // namespace rfss
