// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "rfss/iq_buffer.hpp"
#include "rfss/prng.hpp"
#include "rfss/waveforms.hpp"

namespace rfss {

/// One source's hardware impairment parameters, drawn from the
/// 3GPP-conformance-test ranges. -inf / +inf fields act as neutral flags
/// (no phase noise, no DC offset, no PA compression).
struct ImpairmentDraw {
    double cfo_hz = 0.0;
    double iq_amp_db = 0.0;              // amplitude mismatch, drawn 0.1..3
    double iq_phase_deg = 0.0;           // phase error, drawn 1..10
    double pn_dbc_hz_at_10khz = -INFINITY;  // drawn -110..-90
    double dc_offset_dbc = -INFINITY;       // drawn -40..-30
    double pa_ibo_db = INFINITY;            // input back-off, drawn 3..9
    double rapp_p = 2.0;

    static ImpairmentDraw neutral() { return {}; }
};

/// Uniform draws over the documented ranges. CFO magnitude is log-uniform
/// over 0.05..5 ppm of the standard's representative carrier
/// (GSM 900 MHz, UMTS 2.1 GHz, LTE 1.8 GHz, NR 3.5 GHz), sign uniform.
ImpairmentDraw draw_impairments(StandardId std_id, RandomStream& stream);

/// Representative carrier used for the ppm -> Hz conversion.
double nominal_carrier_hz(StandardId std_id);

IqBuffer apply_cfo(const IqBuffer& x, double cfo_hz);
IqBuffer apply_iq_imbalance(const IqBuffer& x, double amp_db, double phase_deg);
IqBuffer apply_phase_noise(const IqBuffer& x, double dbc_hz_at_10khz,
                           RandomStream& stream);
IqBuffer apply_dc_offset(const IqBuffer& x, double dc_dbc, RandomStream& stream);
IqBuffer apply_pa_rapp(const IqBuffer& x, double ibo_db, double p);

/// Image rejection ratio (dB) of the G1/G2 imbalance model; the closed form
/// the imbalance implementation must reproduce.
double iq_image_rejection_db(double amp_db, double phase_deg);

/// Substream layout inside the impairment stream: each source owns an
/// 8-slot block; slot 0 is the parameter draw, slots 1-2 feed the
/// stochastic chain stages.
inline constexpr uint32_t kImpairmentSubstreamStride = 8;
inline uint32_t impairment_draw_substream(uint32_t source) {
    return kImpairmentSubstreamStride * source;
}

/// Fixed chain PA -> IQ imbalance -> phase noise -> CFO -> DC offset,
/// output renormalized to the input power. Phase-noise and DC draws come
/// from dedicated substreams of (ctx, source_index), so the chain is
/// deterministic given (x, d, ctx, source_index).
IqBuffer apply_chain(const IqBuffer& x, const ImpairmentDraw& d,
                     const SeedContext& ctx, uint32_t source_index = 0);

}  // namespace rfss
