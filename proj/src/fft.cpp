// SPDX-License-Identifier: Apache-2.0
#include "rfss/fft.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace rfss {

Fft::Fft(std::size_t n) : n_(n) {
    if (n == 0 || (n & (n - 1)) != 0)
        throw std::invalid_argument("Fft: size must be a power of two");
    bit_reverse_.resize(n);
    std::size_t log2n = 0;
    while ((1u << log2n) < n) ++log2n;
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t r = 0;
        for (std::size_t b = 0; b < log2n; ++b)
            if (i & (std::size_t{1} << b)) r |= std::size_t{1} << (log2n - 1 - b);
        bit_reverse_[i] = r;
    }
    twiddles_.resize(n / 2);
    for (std::size_t k = 0; k < n / 2; ++k) {
        const double a = -2.0 * std::numbers::pi * static_cast<double>(k) /
                         static_cast<double>(n);
        twiddles_[k] = {std::cos(a), std::sin(a)};
    }
}

void Fft::transform(std::vector<std::complex<double>>& data, bool inverse) const {
    if (data.size() != n_) throw std::invalid_argument("Fft: size mismatch");
    for (std::size_t i = 0; i < n_; ++i) {
        const std::size_t j = bit_reverse_[i];
        if (i < j) std::swap(data[i], data[j]);
    }
    for (std::size_t len = 2; len <= n_; len <<= 1) {
        const std::size_t half = len >> 1;
        const std::size_t stride = n_ / len;
        for (std::size_t start = 0; start < n_; start += len) {
            for (std::size_t k = 0; k < half; ++k) {
                std::complex<double> w = twiddles_[k * stride];
                if (inverse) w = std::conj(w);
                const std::complex<double> a = data[start + k];
                const std::complex<double> b = data[start + k + half] * w;
                data[start + k] = a + b;
                data[start + k + half] = a - b;
            }
        }
    }
    if (inverse) {
        const double s = 1.0 / static_cast<double>(n_);
        for (auto& v : data) v *= s;
    }
}

void Fft::forward(std::vector<std::complex<double>>& data) const {
    transform(data, false);
}

void Fft::inverse(std::vector<std::complex<double>>& data) const {
    transform(data, true);
}

std::vector<std::complex<double>> Fft::forward_copy(
    const std::vector<std::complex<double>>& data) const {
    auto copy = data;
    forward(copy);
    return copy;
}

}  // namespace rfss
