// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "rfss/iq_buffer.hpp"

namespace rfss {

/// Finite cap substituting for +/-inf in degenerate SI-SINR cases.
inline constexpr double kSiSinrCapDb = 300.0;

/// Scale-invariant SINR in dB. Means are removed from both signals, the
/// estimate is projected onto the reference with a conjugated inner
/// product, and the ratio ||a s||^2 / ||e - a s||^2 is returned.
/// Throws std::invalid_argument on length mismatch or length < 2 and
/// std::domain_error when the reference is zero after mean removal.
double si_sinr_db(const IqBuffer& est, const IqBuffer& ref);

/// Permutation-invariant SI-SINR: exhaustive search over all assignments
/// (<= 4! = 24). Returns the best mean and the permutation, where
/// permutation[j] is the estimate index assigned to reference j. Ties break
/// to the lexicographically smallest permutation.
std::pair<double, std::vector<int>> pit_si_sinr(
    const std::vector<IqBuffer>& ests, const std::vector<IqBuffer>& refs);

/// SNR stratification bins: [0,10) -> 0, [10,20) -> 1, rest -> 2.
int snr_bin_of(double snr_db);
const char* snr_bin_label(int bin);

struct EvalRecord {
    std::size_t sample_index = 0;
    double pi_si_sinr_db = 0.0;
    std::vector<int> permutation;
    std::vector<double> per_source_si_sinr_db;
    std::string mode;
    int num_sources = 0;
    int snr_bin = 0;
};

/// Mean PI-SI-SINR grouped by source count (overall and per mode) and by
/// SNR bin on the co-channel subset, with per-cell counts.
struct StratifiedReport {
    struct Cell {
        double mean_db = 0.0;
        std::size_t count = 0;
    };
    std::string method;
    Cell overall;
    Cell by_count[3];            // 2, 3, 4 sources
    Cell co_by_count[3];
    Cell adj_by_count[3];
    Cell snr_by_count_bin[3][3]; // co-channel only, [count][bin]

    std::string to_text() const;
    std::string to_csv() const;
};

StratifiedReport stratified_report(const std::vector<EvalRecord>& records,
                                   const std::string& method);

/// Welch PSD: Hann-windowed segments with 50% overlap. Returns the
/// two-sided PSD (power per Hz) reordered so frequencies run from -rate/2.
struct PsdEstimate {
    std::vector<double> freq_hz;
    std::vector<double> psd;  // linear
};
PsdEstimate welch_psd(const IqBuffer& x, std::size_t segment = 4096);

/// Width of the band holding the central 99% of the PSD mass.
double occupied_bandwidth_99(const PsdEstimate& psd);

double papr_db(const IqBuffer& x);

/// Characterization bundle for one buffer (needs length >= 4096):
/// PAPR, Welch PSD, 99% occupied bandwidth, 256-bin envelope histogram,
/// and an STFT spectrogram (1024-point, hop 256).
struct SignalStats {
    double papr_db = 0.0;
    PsdEstimate psd;
    double occupied_bw_99_hz = 0.0;
    std::vector<double> envelope_bin_centers;
    std::vector<double> envelope_density;
    std::vector<std::vector<double>> spectrogram_db;  // [frame][bin], shifted
    double spectrogram_hop_s = 0.0;
    double sample_rate_hz = 0.0;
};
SignalStats characterize(const IqBuffer& x);

}  // namespace rfss
