// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace rfss {

using cplx = std::complex<double>;

/// Contiguous complex baseband samples plus the rate they were taken at.
/// This is the currency every generator, channel, and metric trades in.
struct IqBuffer {
    std::vector<cplx> samples;
    double sample_rate_hz = 0.0;

    IqBuffer() = default;
    IqBuffer(std::vector<cplx> s, double rate)
        : samples(std::move(s)), sample_rate_hz(rate) {}
    static IqBuffer zeros(std::size_t n, double rate) {
        return IqBuffer(std::vector<cplx>(n), rate);
    }

    std::size_t size() const { return samples.size(); }
    bool empty() const { return samples.empty(); }
    cplx& operator[](std::size_t i) { return samples[i]; }
    const cplx& operator[](std::size_t i) const { return samples[i]; }
};

/// Mean of |x[n]|^2 over the buffer (0 for an empty buffer).
double mean_power(const IqBuffer& x);

/// Peak of |x[n]|^2 over the buffer.
double peak_power(const IqBuffer& x);

/// Rescale in place so mean power equals target. Throws if the buffer is
/// empty or identically zero.
void normalize_power(IqBuffer& x, double target = 1.0);

/// True if every sample is finite (no NaN/Inf in either component).
bool all_finite(const IqBuffer& x);

}  // namespace rfss
