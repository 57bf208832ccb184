// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "rfss/iq_buffer.hpp"

namespace rfss {

enum class FilterKind {
    gaussian_gmsk,       // GMSK frequency pulse: Gaussian convolved with rect
    root_raised_cosine,  // chip/symbol shaping pulse
};

/// Pulse-shaping filter request.
///
/// gaussian_gmsk taps sum to 1 so an isolated +1 symbol accumulates exactly
/// pi*h of phase; root_raised_cosine taps carry unit energy.
struct FilterSpec {
    FilterKind kind = FilterKind::root_raised_cosine;
    double bt_or_rolloff = 0.3;  // BT product, or rolloff alpha
    int span_symbols = 3;
    int samples_per_symbol = 8;
};

/// Symmetric odd-length tap vector for the requested pulse.
/// Throws std::invalid_argument for out-of-range parameters
/// (BT in (0,1], alpha in [0,1], positive span and oversampling).
std::vector<double> design_filter(const FilterSpec& spec);

/// Zero-padded linear convolution of complex samples with real taps,
/// trimmed to the input length with the group delay (taps.size()-1)/2
/// compensated ("same" alignment).
std::vector<cplx> fir_filter_same(const std::vector<cplx>& x,
                                  const std::vector<double>& taps);

}  // namespace rfss
