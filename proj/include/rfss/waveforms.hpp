// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <string>
#include <vector>

#include "rfss/iq_buffer.hpp"
#include "rfss/prng.hpp"

namespace rfss {

/// Common intermediate sample rate shared by every generated waveform.
inline constexpr double kCommonRateHz = 30.72e6;

enum class StandardId { GSM = 0, UMTS = 1, LTE = 2, NR = 3 };
inline constexpr int kNumStandards = 4;

const char* to_string(StandardId id);
StandardId standard_from_string(const std::string& name);

struct WaveformConfig {
    StandardId standard = StandardId::GSM;
    std::size_t duration_samples = 122880;
    int qam_order = 4;             // LTE/NR: 4, 16 or 64
    int num_users = 1;             // UMTS: 1..8
    int numerology_mu = 1;         // NR: fixed at 1
    int occupied_subcarriers = 0;  // LTE/NR: 0 selects the default
};

/// Dispatch on cfg.standard. Every generator returns a unit-average-power
/// buffer of exactly cfg.duration_samples samples at 30.72 MHz.
IqBuffer generate_waveform(const WaveformConfig& cfg, RandomStream& stream);

IqBuffer gen_gsm(const WaveformConfig& cfg, RandomStream& stream);
IqBuffer gen_umts(const WaveformConfig& cfg, RandomStream& stream);
IqBuffer gen_lte(const WaveformConfig& cfg, RandomStream& stream);
IqBuffer gen_nr(const WaveformConfig& cfg, RandomStream& stream);

// ---- GSM internals -------------------------------------------------------

/// Number of GMSK symbols needed to cover duration_samples at 30.72 MHz
/// including resampler lead-in/lead-out margin.
std::size_t gsm_symbol_count(std::size_t duration_samples);

/// GMSK-modulate a +/-1 symbol sequence (already differentially encoded):
/// Gaussian BT=0.3 pulse, h=0.5 phase integration at 16 samples/symbol
/// (13/3 MHz), two-stage rational resampling to 30.72 MHz, steady-state
/// trim to duration_samples, unit power.
IqBuffer gsm_modulate(const std::vector<int>& symbols,
                      std::size_t duration_samples);

// ---- UMTS internals ------------------------------------------------------

/// OVSF channelization code (recursive +/-1 construction).
/// sf must be a power of two; index in [0, sf).
std::vector<int> ovsf_code(int sf, int index);

/// TS 25.213 downlink scrambling sequence for the given code number:
/// chips are (+/-1) + j(+/-1) from the two 18-stage Gold LFSRs.
std::vector<cplx> umts_scrambling_sequence(int code_number, std::size_t length);

/// Spread, summed, optionally scrambled chip sequence plus the per-user
/// ground truth (symbols and code assignments) for despreading checks.
struct UmtsChips {
    std::vector<cplx> chips;
    std::vector<std::vector<cplx>> user_symbols;
    std::vector<int> user_codes;  // OVSF indices at SF 16
    int scrambling_index = 0;
};
UmtsChips build_umts_chips(int num_users, std::size_t n_chips,
                           bool scramble, RandomStream& stream);

// ---- OFDM internals ------------------------------------------------------

/// Static description of one CP-OFDM numerology.
struct OfdmGrid {
    int fft_size = 1024;
    int occupied = 600;            // even count, split across DC (DC null)
    std::vector<int> cp_lengths;   // per symbol within one slot
    double native_rate_hz = 15.36e6;
};

OfdmGrid lte_grid(int occupied_subcarriers);   // FFT 1024 @ 15.36 MHz
OfdmGrid nr_grid(int occupied_subcarriers);    // FFT 1024 @ 30.72 MHz

/// Unit-mean-energy QAM constellation point drawn from the stream.
cplx draw_qam(int order, RandomStream& stream);

/// CP-OFDM modulator. symbol_at(l, k) supplies the payload for logical
/// subcarrier k (negative and positive, never 0) of symbol l.
IqBuffer ofdm_modulate(const OfdmGrid& grid, int n_symbols,
                       const std::function<cplx(int, int)>& symbol_at);

/// Blind EVM in percent: demodulate (strip CP, FFT, read occupied bins),
/// normalize the constellation cloud, slice to the nearest ideal point.
double ofdm_evm_percent(const IqBuffer& x, int fft_size, int occupied,
                        const std::vector<int>& cp_lengths, int qam_order);

}  // namespace rfss
