// SPDX-License-Identifier: Apache-2.0
#include "rfss/impairments.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace rfss {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}  // namespace

double nominal_carrier_hz(StandardId std_id) {
    switch (std_id) {
        case StandardId::GSM: return 900e6;
        case StandardId::UMTS: return 2.1e9;
        case StandardId::LTE: return 1.8e9;
        case StandardId::NR: return 3.5e9;
    }
    throw std::invalid_argument("nominal_carrier_hz: bad standard");
}

ImpairmentDraw draw_impairments(StandardId std_id, RandomStream& stream) {
    ImpairmentDraw d;
    const double ppm = stream.log_uniform(0.05, 5.0);
    const bool negative = (stream.next_u32() & 1u) != 0;
    d.cfo_hz = (negative ? -1.0 : 1.0) * ppm * 1e-6 * nominal_carrier_hz(std_id);
    d.iq_amp_db = stream.uniform(0.1, 3.0);
    d.iq_phase_deg = stream.uniform(1.0, 10.0);
    d.pn_dbc_hz_at_10khz = stream.uniform(-110.0, -90.0);
    d.dc_offset_dbc = stream.uniform(-40.0, -30.0);
    d.pa_ibo_db = stream.uniform(3.0, 9.0);
    d.rapp_p = 2.0;
    return d;
}

IqBuffer apply_cfo(const IqBuffer& x, double cfo_hz) {
    if (cfo_hz == 0.0) return x;
    IqBuffer y = x;
    const double w = kTwoPi * cfo_hz / x.sample_rate_hz;
    for (std::size_t n = 0; n < y.size(); ++n)
        y.samples[n] *= cplx{std::cos(w * n), std::sin(w * n)};
    return y;
}

IqBuffer apply_iq_imbalance(const IqBuffer& x, double amp_db, double phase_deg) {
    const double g = std::pow(10.0, amp_db / 20.0);
    const double theta = phase_deg * std::numbers::pi / 180.0;
    const cplx g1 = 0.5 * (1.0 + g * std::polar(1.0, -theta));
    const cplx g2 = 0.5 * (1.0 - g * std::polar(1.0, theta));
    IqBuffer y = x;
    for (cplx& v : y.samples) v = g1 * v + g2 * std::conj(v);
    return y;
}

double iq_image_rejection_db(double amp_db, double phase_deg) {
    const double g = std::pow(10.0, amp_db / 20.0);
    const double theta = phase_deg * std::numbers::pi / 180.0;
    const cplx g1 = 0.5 * (1.0 + g * std::polar(1.0, -theta));
    const cplx g2 = 0.5 * (1.0 - g * std::polar(1.0, theta));
    return 10.0 * std::log10(std::norm(g1) / std::norm(g2));
}

IqBuffer apply_phase_noise(const IqBuffer& x, double dbc_hz_at_10khz,
                           RandomStream& stream) {
    if (std::isinf(dbc_hz_at_10khz) && dbc_hz_at_10khz < 0.0) return x;
    // Wiener phase: increment variance chosen so the phase PSD crosses the
    // configured level at a 10 kHz offset.
    const double offset = kTwoPi * 1e4;
    const double sigma2 =
        std::pow(10.0, dbc_hz_at_10khz / 10.0) * offset * offset / x.sample_rate_hz;
    const double sigma = std::sqrt(sigma2);
    IqBuffer y = x;
    double phi = 0.0;
    for (cplx& v : y.samples) {
        phi += sigma * stream.normal();
        v *= cplx{std::cos(phi), std::sin(phi)};
    }
    return y;
}

IqBuffer apply_dc_offset(const IqBuffer& x, double dc_dbc, RandomStream& stream) {
    if (std::isinf(dc_dbc) && dc_dbc < 0.0) return x;
    const double power = mean_power(x) * std::pow(10.0, dc_dbc / 10.0);
    const cplx c = std::polar(std::sqrt(power), stream.uniform(0.0, kTwoPi));
    IqBuffer y = x;
    for (cplx& v : y.samples) v += c;
    return y;
}

IqBuffer apply_pa_rapp(const IqBuffer& x, double ibo_db, double p) {
    if (p <= 0.0) throw std::invalid_argument("apply_pa_rapp: p must be positive");
    if (std::isinf(ibo_db) && ibo_db > 0.0) return x;
    const double a_sat2 = mean_power(x) * std::pow(10.0, ibo_db / 10.0);
    const double a_sat = std::sqrt(a_sat2);
    IqBuffer y = x;
    for (cplx& v : y.samples) {
        const double r = std::abs(v) / a_sat;
        v /= std::pow(1.0 + std::pow(r, 2.0 * p), 1.0 / (2.0 * p));
    }
    return y;
}

IqBuffer apply_chain(const IqBuffer& x, const ImpairmentDraw& d,
                     const SeedContext& ctx, uint32_t source_index) {
    const double in_power = mean_power(x);
    RandomStream pn(ctx, kImpairmentSubstreamStride * source_index + 1);
    RandomStream dc(ctx, kImpairmentSubstreamStride * source_index + 2);
    IqBuffer y = apply_pa_rapp(x, d.pa_ibo_db, d.rapp_p);
    y = apply_iq_imbalance(y, d.iq_amp_db, d.iq_phase_deg);
    y = apply_phase_noise(y, d.pn_dbc_hz_at_10khz, pn);
    y = apply_cfo(y, d.cfo_hz);
    y = apply_dc_offset(y, d.dc_offset_dbc, dc);
    if (in_power > 0.0) normalize_power(y, in_power);
    return y;
}

}  // namespace rfss
