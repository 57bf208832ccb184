// SPDX-License-Identifier: Apache-2.0
#include "rfss/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "rfss/fft.hpp"

namespace rfss {

double si_sinr_db(const IqBuffer& est, const IqBuffer& ref) {
    if (est.size() != ref.size())
        throw std::invalid_argument("si_sinr: length mismatch");
    if (ref.size() < 2)
        throw std::invalid_argument("si_sinr: need at least 2 samples");
    const std::size_t n = ref.size();

    cplx est_mean = 0.0, ref_mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        est_mean += est[i];
        ref_mean += ref[i];
    }
    est_mean /= static_cast<double>(n);
    ref_mean /= static_cast<double>(n);

    cplx dot = 0.0;
    double ref_energy = 0.0, est_energy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const cplx e = est[i] - est_mean;
        const cplx r = ref[i] - ref_mean;
        dot += e * std::conj(r);
        ref_energy += std::norm(r);
        est_energy += std::norm(e);
    }
    if (ref_energy <= 0.0)
        throw std::domain_error("si_sinr: reference is zero after mean removal");
    if (est_energy <= 0.0) return -kSiSinrCapDb;  // empty estimate, floor score

    const cplx alpha = dot / ref_energy;
    const double target = std::norm(alpha) * ref_energy;
    // ||e - a r||^2 = ||e||^2 - |<e,r>|^2 / ||r||^2, computed stably.
    const double residual = std::max(0.0, est_energy - target);
    if (residual <= target * std::pow(10.0, -kSiSinrCapDb / 10.0))
        return kSiSinrCapDb;
    if (target <= residual * std::pow(10.0, -kSiSinrCapDb / 10.0))
        return -kSiSinrCapDb;
    return 10.0 * std::log10(target / residual);
}

std::pair<double, std::vector<int>> pit_si_sinr(
    const std::vector<IqBuffer>& ests, const std::vector<IqBuffer>& refs) {
    if (ests.size() != refs.size())
        throw std::invalid_argument("pit_si_sinr: size mismatch");
    if (ests.empty() || ests.size() > 4)
        throw std::invalid_argument("pit_si_sinr: need 1..4 sources");
    const int k = static_cast<int>(ests.size());

    // Pairwise scores once; permutations only combine them.
    std::vector<std::vector<double>> score(static_cast<std::size_t>(k),
                                           std::vector<double>(static_cast<std::size_t>(k)));
    for (int e = 0; e < k; ++e)
        for (int r = 0; r < k; ++r)
            score[static_cast<std::size_t>(e)][static_cast<std::size_t>(r)] =
                si_sinr_db(ests[static_cast<std::size_t>(e)],
                           refs[static_cast<std::size_t>(r)]);

    std::vector<int> perm(static_cast<std::size_t>(k));
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<int> best_perm = perm;
    double best = -INFINITY;
    do {
        double mean = 0.0;
        for (int r = 0; r < k; ++r)
            mean += score[static_cast<std::size_t>(perm[static_cast<std::size_t>(r)])]
                         [static_cast<std::size_t>(r)];
        mean /= k;
        if (mean > best) {  // strict: ties keep the earlier (lexicographic) perm
            best = mean;
            best_perm = perm;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return {best, best_perm};
}

int snr_bin_of(double snr_db) {
    if (snr_db < 10.0) return 0;
    if (snr_db < 20.0) return 1;
    return 2;
}

const char* snr_bin_label(int bin) {
    switch (bin) {
        case 0: return "0-10";
        case 1: return "10-20";
        case 2: return "20-30";
    }
    return "?";
}

namespace {

struct Accum {
    double sum = 0.0;
    std::size_t n = 0;
    void add(double v) {
        sum += v;
        ++n;
    }
    StratifiedReport::Cell cell() const {
        return {n ? sum / static_cast<double>(n) : 0.0, n};
    }
};

}  // namespace

StratifiedReport stratified_report(const std::vector<EvalRecord>& records,
                                   const std::string& method) {
    if (records.empty())
        throw std::invalid_argument("stratified_report: no records");
    StratifiedReport rep;
    rep.method = method;
    Accum overall, by_count[3], co[3], adj[3], snr[3][3];
    for (const auto& r : records) {
        const int c = r.num_sources - 2;
        if (c < 0 || c > 2)
            throw std::invalid_argument("stratified_report: bad source count");
        overall.add(r.pi_si_sinr_db);
        by_count[c].add(r.pi_si_sinr_db);
        if (r.mode == "co_channel") {
            co[c].add(r.pi_si_sinr_db);
            snr[c][r.snr_bin].add(r.pi_si_sinr_db);
        } else {
            adj[c].add(r.pi_si_sinr_db);
        }
    }
    rep.overall = overall.cell();
    for (int c = 0; c < 3; ++c) {
        rep.by_count[c] = by_count[c].cell();
        rep.co_by_count[c] = co[c].cell();
        rep.adj_by_count[c] = adj[c].cell();
        for (int b = 0; b < 3; ++b) rep.snr_by_count_bin[c][b] = snr[c][b].cell();
    }
    return rep;
}

std::string StratifiedReport::to_text() const {
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(2);
    os << "PI-SI-SINR report, method = " << method << "\n";
    os << "  overall: " << overall.mean_db << " dB (N=" << overall.count << ")\n";
    os << "  sources      overall            co-channel         adjacent\n";
    for (int c = 0; c < 3; ++c) {
        os << "  " << (c + 2) << "-source   ";
        auto cell = [&](const Cell& x) {
            std::ostringstream v;
            v.setf(std::ios::fixed);
            v.precision(2);
            if (x.count == 0)
                v << "   --   (N=0)";
            else
                v << std::setw(7) << x.mean_db << " (N=" << x.count << ")";
            return v.str();
        };
        os << cell(by_count[c]) << "   " << cell(co_by_count[c]) << "   "
           << cell(adj_by_count[c]) << "\n";
    }
    os << "  co-channel by SNR bin (dB):\n";
    for (int c = 0; c < 3; ++c) {
        os << "  " << (c + 2) << "-source   ";
        for (int b = 0; b < 3; ++b) {
            const Cell& x = snr_by_count_bin[c][b];
            os << snr_bin_label(b) << ": ";
            if (x.count == 0)
                os << "--";
            else
                os << x.mean_db;
            os << " (N=" << x.count << ")  ";
        }
        os << "\n";
    }
    return os.str();
}

std::string StratifiedReport::to_csv() const {
    std::ostringstream os;
    os << "method,group,sources,snr_bin,mean_db,count\n";
    os.setf(std::ios::fixed);
    os.precision(6);
    os << method << ",overall,,," << overall.mean_db << "," << overall.count << "\n";
    for (int c = 0; c < 3; ++c) {
        os << method << ",by_count," << (c + 2) << ",," << by_count[c].mean_db
           << "," << by_count[c].count << "\n";
        os << method << ",co_channel," << (c + 2) << ",,"
           << co_by_count[c].mean_db << "," << co_by_count[c].count << "\n";
        os << method << ",adjacent_channel," << (c + 2) << ",,"
           << adj_by_count[c].mean_db << "," << adj_by_count[c].count << "\n";
        for (int b = 0; b < 3; ++b)
            os << method << ",co_channel_snr," << (c + 2) << ","
               << snr_bin_label(b) << "," << snr_by_count_bin[c][b].mean_db << ","
               << snr_by_count_bin[c][b].count << "\n";
    }
    return os.str();
}

PsdEstimate welch_psd(const IqBuffer& x, std::size_t segment) {
    if (x.size() < segment)
        throw std::invalid_argument("welch_psd: buffer shorter than one segment");
    const std::size_t hop = segment / 2;
    const Fft fft(segment);

    std::vector<double> window(segment);
    double window_energy = 0.0;
    for (std::size_t i = 0; i < segment; ++i) {
        window[i] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi *
                                          static_cast<double>(i) /
                                          static_cast<double>(segment)));
        window_energy += window[i] * window[i];
    }

    std::vector<double> acc(segment, 0.0);
    std::vector<cplx> buf(segment);
    std::size_t count = 0;
    for (std::size_t start = 0; start + segment <= x.size(); start += hop) {
        for (std::size_t i = 0; i < segment; ++i)
            buf[i] = x.samples[start + i] * window[i];
        fft.forward(buf);
        for (std::size_t i = 0; i < segment; ++i) acc[i] += std::norm(buf[i]);
        ++count;
    }
    const double scale =
        1.0 / (static_cast<double>(count) * window_energy * x.sample_rate_hz);
    for (double& v : acc) v *= scale;

    PsdEstimate out;
    out.psd = fft_shift(acc);
    out.freq_hz.resize(segment);
    const double df = x.sample_rate_hz / static_cast<double>(segment);
    for (std::size_t i = 0; i < segment; ++i)
        out.freq_hz[i] =
            (static_cast<double>(i) - static_cast<double>(segment / 2)) * df;
    return out;
}

double occupied_bandwidth_99(const PsdEstimate& psd) {
    const double total = std::accumulate(psd.psd.begin(), psd.psd.end(), 0.0);
    if (total <= 0.0) return 0.0;
    double acc = 0.0;
    double f_lo = psd.freq_hz.front(), f_hi = psd.freq_hz.back();
    bool lo_found = false;
    for (std::size_t i = 0; i < psd.psd.size(); ++i) {
        acc += psd.psd[i];
        if (!lo_found && acc >= 0.005 * total) {
            f_lo = psd.freq_hz[i];
            lo_found = true;
        }
        if (acc >= 0.995 * total) {
            f_hi = psd.freq_hz[i];
            break;
        }
    }
    return f_hi - f_lo;
}

double papr_db(const IqBuffer& x) {
    const double mean = mean_power(x);
    if (mean <= 0.0) throw std::invalid_argument("papr_db: zero buffer");
    return 10.0 * std::log10(peak_power(x) / mean);
}

SignalStats characterize(const IqBuffer& x) {
    if (x.size() < 4096)
        throw std::invalid_argument("characterize: need at least 4096 samples");
    SignalStats st;
    st.sample_rate_hz = x.sample_rate_hz;
    st.papr_db = papr_db(x);
    st.psd = welch_psd(x, 4096);
    st.occupied_bw_99_hz = occupied_bandwidth_99(st.psd);

    // Envelope histogram, 256 bins over [0, max].
    constexpr std::size_t kBins = 256;
    double env_max = 0.0;
    for (const cplx& v : x.samples) env_max = std::max(env_max, std::abs(v));
    if (env_max <= 0.0) env_max = 1.0;
    std::vector<std::size_t> counts(kBins, 0);
    for (const cplx& v : x.samples) {
        std::size_t b = static_cast<std::size_t>(std::abs(v) / env_max * kBins);
        if (b >= kBins) b = kBins - 1;
        ++counts[b];
    }
    const double bin_w = env_max / kBins;
    st.envelope_bin_centers.resize(kBins);
    st.envelope_density.resize(kBins);
    for (std::size_t b = 0; b < kBins; ++b) {
        st.envelope_bin_centers[b] = (static_cast<double>(b) + 0.5) * bin_w;
        st.envelope_density[b] = static_cast<double>(counts[b]) /
                                 (static_cast<double>(x.size()) * bin_w);
    }

    // Spectrogram: 1024-point frames, hop 256, Hann.
    constexpr std::size_t kFrame = 1024, kHop = 256;
    const Fft fft(kFrame);
    std::vector<double> window(kFrame);
    for (std::size_t i = 0; i < kFrame; ++i)
        window[i] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi *
                                          static_cast<double>(i) / kFrame));
    std::vector<cplx> buf(kFrame);
    for (std::size_t start = 0; start + kFrame <= x.size(); start += kHop) {
        for (std::size_t i = 0; i < kFrame; ++i)
            buf[i] = x.samples[start + i] * window[i];
        fft.forward(buf);
        std::vector<double> row(kFrame);
        for (std::size_t i = 0; i < kFrame; ++i)
            row[i] = 10.0 * std::log10(std::norm(buf[i]) + 1e-20);
        st.spectrogram_db.push_back(fft_shift(row));
    }
    st.spectrogram_hop_s = static_cast<double>(kHop) / x.sample_rate_hz;
    return st;
}

}  // namespace rfss
