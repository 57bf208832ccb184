// SPDX-License-Identifier: Apache-2.0
#include "rfss/filter_design.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace rfss {

namespace {

constexpr double kPi = std::numbers::pi;

double gauss_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

// GMSK frequency pulse: unit-area Gaussian (std set by BT) convolved with a
// unit-area rect of one symbol. Evaluated in symbol-time units.
double gmsk_pulse(double t, double bt) {
    const double sigma = std::sqrt(std::log(2.0)) / (2.0 * kPi * bt);
    return gauss_cdf((t + 0.5) / sigma) - gauss_cdf((t - 0.5) / sigma);
}

double rrc_pulse(double t, double alpha) {
    // Limit points of the closed form.
    if (std::abs(t) < 1e-12) return 1.0 - alpha + 4.0 * alpha / kPi;
    if (alpha > 0.0) {
        const double tb = 1.0 / (4.0 * alpha);
        if (std::abs(std::abs(t) - tb) < 1e-9) {
            const double c = alpha / std::numbers::sqrt2;
            return c * ((1.0 + 2.0 / kPi) * std::sin(kPi / (4.0 * alpha)) +
                        (1.0 - 2.0 / kPi) * std::cos(kPi / (4.0 * alpha)));
        }
    }
    const double num = std::sin(kPi * t * (1.0 - alpha)) +
                       4.0 * alpha * t * std::cos(kPi * t * (1.0 + alpha));
    const double den = kPi * t * (1.0 - std::pow(4.0 * alpha * t, 2));
    return num / den;
}

}  // namespace

std::vector<double> design_filter(const FilterSpec& spec) {
    if (spec.span_symbols <= 0 || spec.samples_per_symbol <= 0)
        throw std::invalid_argument("design_filter: span and oversampling must be positive");
    const int spb = spec.samples_per_symbol;
    const int half = spec.span_symbols * spb / 2;
    std::vector<double> taps(2 * half + 1);

    switch (spec.kind) {
        case FilterKind::gaussian_gmsk: {
            const double bt = spec.bt_or_rolloff;
            if (bt <= 0.0 || bt > 1.0)
                throw std::invalid_argument("design_filter: BT must be in (0, 1]");
            double sum = 0.0;
            for (int m = -half; m <= half; ++m) {
                const double t = static_cast<double>(m) / spb;
                taps[m + half] = gmsk_pulse(t, bt);
                sum += taps[m + half];
            }
            for (double& v : taps) v /= sum;  // isolated symbol -> pi*h of phase
            return taps;
        }
        case FilterKind::root_raised_cosine: {
            const double alpha = spec.bt_or_rolloff;
            if (alpha < 0.0 || alpha > 1.0)
                throw std::invalid_argument("design_filter: rolloff must be in [0, 1]");
            double energy = 0.0;
            for (int m = -half; m <= half; ++m) {
                const double t = static_cast<double>(m) / spb;
                taps[m + half] = rrc_pulse(t, alpha);
                energy += taps[m + half] * taps[m + half];
            }
            const double g = 1.0 / std::sqrt(energy);
            for (double& v : taps) v *= g;
            return taps;
        }
    }
    throw std::invalid_argument("design_filter: unknown kind");
}

std::vector<cplx> fir_filter_same(const std::vector<cplx>& x,
                                  const std::vector<double>& taps) {
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(x.size());
    const std::ptrdiff_t nt = static_cast<std::ptrdiff_t>(taps.size());
    const std::ptrdiff_t delay = (nt - 1) / 2;
    std::vector<cplx> y(x.size());
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        cplx acc = 0.0;
        const std::ptrdiff_t center = i + delay;
        const std::ptrdiff_t t_lo = std::max<std::ptrdiff_t>(0, center - n + 1);
        const std::ptrdiff_t t_hi = std::min(nt - 1, center);
        for (std::ptrdiff_t t = t_lo; t <= t_hi; ++t)
            acc += taps[static_cast<std::size_t>(t)] * x[static_cast<std::size_t>(center - t)];
        y[static_cast<std::size_t>(i)] = acc;
    }
    return y;
}

}  // namespace rfss
