// SPDX-License-Identifier: Apache-2.0
#include "rfss/iq_buffer.hpp"

#include <cmath>
#include <stdexcept>

namespace rfss {

double mean_power(const IqBuffer& x) {
    if (x.empty()) return 0.0;
    double acc = 0.0;
    for (const cplx& v : x.samples) acc += std::norm(v);
    return acc / static_cast<double>(x.size());
}

double peak_power(const IqBuffer& x) {
    double peak = 0.0;
    for (const cplx& v : x.samples) peak = std::max(peak, std::norm(v));
    return peak;
}

void normalize_power(IqBuffer& x, double target) {
    const double p = mean_power(x);
    if (p <= 0.0) throw std::invalid_argument("normalize_power: empty or zero buffer");
    const double g = std::sqrt(target / p);
    for (cplx& v : x.samples) v *= g;
}

bool all_finite(const IqBuffer& x) {
    for (const cplx& v : x.samples)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
}

}  // namespace rfss
