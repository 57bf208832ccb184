// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "rfss/fft.hpp"
#include "rfss/metrics.hpp"
#include "rfss/waveforms.hpp"

using namespace rfss;

namespace {

RandomStream stream_for(uint64_t idx) {
    return RandomStream({42, idx, StreamTag::bits});
}

// Average phase increment of a (near-)pure tone, in Hz.
double phase_slope_hz(const IqBuffer& x) {
    double acc = 0.0;
    for (std::size_t n = 1; n < x.size(); ++n)
        acc += std::arg(x.samples[n] * std::conj(x.samples[n - 1]));
    return acc / static_cast<double>(x.size() - 1) * x.sample_rate_hz /
           (2.0 * std::numbers::pi);
}

// Brute-force bit-level LFSR oracle for the TS 25.213 downlink sequence:
// two 18-stage shift registers stepped one bit at a time.
std::vector<cplx> gold_oracle(int code_number, int length) {
    const int period = (1 << 18) - 1;
    std::vector<int> xs, ys;
    {
        std::vector<int> reg(18, 0);
        reg[0] = 1;
        for (int i = 0; i < period; ++i) {
            xs.push_back(reg[0]);
            const int fb = reg[7] ^ reg[0];  // 1 + X^7 + X^18
            for (int b = 0; b < 17; ++b) reg[b] = reg[b + 1];
            reg[17] = fb;
        }
    }
    {
        std::vector<int> reg(18, 1);
        for (int i = 0; i < period; ++i) {
            ys.push_back(reg[0]);
            const int fb = reg[10] ^ reg[7] ^ reg[5] ^ reg[0];
            for (int b = 0; b < 17; ++b) reg[b] = reg[b + 1];
            reg[17] = fb;
        }
    }
    std::vector<cplx> out;
    for (int i = 0; i < length; ++i) {
        const int zi = xs[(i + code_number) % period] ^ ys[i % period];
        const int j = (i + 131072) % period;
        const int zq = xs[(j + code_number) % period] ^ ys[j];
        out.push_back({zi ? -1.0 : 1.0, zq ? -1.0 : 1.0});
    }
    return out;
}

std::size_t fft_peak_bin(const std::vector<cplx>& window) {
    Fft fft(window.size());
    auto seg = window;
    fft.forward(seg);
    std::size_t peak = 0;
    double best = 0.0;
    for (std::size_t i = 0; i < seg.size(); ++i)
        if (std::norm(seg[i]) > best) {
            best = std::norm(seg[i]);
            peak = i;
        }
    return peak;
}

}  // namespace

TEST_CASE("all generators deliver unit power at the requested length") {
    for (const StandardId id : {StandardId::GSM, StandardId::UMTS,
                                StandardId::LTE, StandardId::NR}) {
        WaveformConfig cfg;
        cfg.standard = id;
        cfg.duration_samples = 122880;
        if (id == StandardId::UMTS) cfg.num_users = 3;
        RandomStream s = stream_for(static_cast<uint64_t>(id));
        const IqBuffer x = generate_waveform(cfg, s);
        CHECK(x.size() == 122880);
        CHECK(x.sample_rate_hz == kCommonRateHz);
        CHECK(mean_power(x) == doctest::Approx(1.0).epsilon(1e-6));
        CHECK(all_finite(x));
    }
}

TEST_CASE("generation is deterministic in the seed context") {
    WaveformConfig cfg;
    cfg.standard = StandardId::LTE;
    RandomStream a = stream_for(7), b = stream_for(7);
    const IqBuffer xa = generate_waveform(cfg, a);
    const IqBuffer xb = generate_waveform(cfg, b);
    REQUIRE(xa.size() == xb.size());
    for (std::size_t i = 0; i < xa.size(); ++i) CHECK(xa[i] == xb[i]);
}

TEST_CASE("generators validate their configs") {
    WaveformConfig cfg;
    cfg.standard = StandardId::LTE;
    RandomStream s = stream_for(0);
    CHECK_THROWS_AS(gen_gsm(cfg, s), std::invalid_argument);
    cfg.occupied_subcarriers = 601;
    CHECK_THROWS_AS(gen_lte(cfg, s), std::invalid_argument);
    cfg = WaveformConfig{};
    cfg.standard = StandardId::UMTS;
    cfg.num_users = 9;
    CHECK_THROWS_AS(gen_umts(cfg, s), std::invalid_argument);
    cfg = WaveformConfig{};
    cfg.standard = StandardId::NR;
    cfg.occupied_subcarriers = 1000;
    CHECK_THROWS_AS(gen_nr(cfg, s), std::invalid_argument);
    cfg.occupied_subcarriers = 0;
    cfg.numerology_mu = 2;
    CHECK_THROWS_AS(gen_nr(cfg, s), std::invalid_argument);
}

// ---- GSM ----------------------------------------------------------------

TEST_CASE("gsm envelope is constant and PAPR stays under 2 dB") {
    WaveformConfig cfg;
    cfg.standard = StandardId::GSM;
    RandomStream s = stream_for(100);
    const IqBuffer x = gen_gsm(cfg, s);

    double lo = 1e300, hi = 0.0, mean = 0.0, sq = 0.0;
    for (const cplx& v : x.samples) {
        const double a = std::abs(v);
        lo = std::min(lo, a);
        hi = std::max(hi, a);
        mean += a;
        sq += a * a;
    }
    mean /= static_cast<double>(x.size());
    sq /= static_cast<double>(x.size());
    CHECK(20.0 * std::log10(hi / lo) < 0.2);
    CHECK(papr_db(x) <= 2.0);
    const double cv = std::sqrt(std::max(0.0, sq - mean * mean)) / mean;
    CHECK(cv <= 0.05);
}

TEST_CASE("gsm with constant +1 symbols is a tone at a quarter symbol rate") {
    const std::size_t duration = 61440;
    std::vector<int> symbols(gsm_symbol_count(duration), 1);
    const IqBuffer x = gsm_modulate(symbols, duration);
    const double f = phase_slope_hz(x);
    CHECK(f == doctest::Approx(13e6 / 48.0 / 4.0).epsilon(1e-3));  // 67.708 kHz
}

TEST_CASE("gsm occupied bandwidth matches the narrowband GMSK footprint") {
    WaveformConfig cfg;
    cfg.standard = StandardId::GSM;
    RandomStream s = stream_for(3);
    const IqBuffer x = gen_gsm(cfg, s);
    const double bw = occupied_bandwidth_99(welch_psd(x, 32768));
    CHECK(bw >= 160e3);
    CHECK(bw <= 260e3);
}

// ---- UMTS ---------------------------------------------------------------

TEST_CASE("ovsf base case and orthogonality") {
    CHECK(ovsf_code(2, 0) == std::vector<int>{1, 1});
    CHECK(ovsf_code(2, 1) == std::vector<int>{1, -1});
    for (int i = 0; i < 16; ++i) {
        for (int j = 0; j < 16; ++j) {
            const auto a = ovsf_code(16, i);
            const auto b = ovsf_code(16, j);
            int dot = 0;
            for (int c = 0; c < 16; ++c) dot += a[c] * b[c];
            CHECK(dot == (i == j ? 16 : 0));
        }
    }
    CHECK_THROWS_AS(ovsf_code(12, 0), std::invalid_argument);
    CHECK_THROWS_AS(ovsf_code(16, 16), std::invalid_argument);
}

TEST_CASE("downlink scrambling sequence matches the shift-register oracle") {
    for (const int code : {0, 16, 8176}) {
        const auto got = umts_scrambling_sequence(code, 64);
        const auto ref = gold_oracle(code, 64);
        for (int i = 0; i < 64; ++i) CHECK(got[i] == ref[i]);
    }
}

TEST_CASE("despreading recovers user symbols when scrambling is disabled") {
    RandomStream s = stream_for(11);
    const std::size_t n_chips = 16 * 50;
    const UmtsChips frame = build_umts_chips(2, n_chips, /*scramble=*/false, s);
    REQUIRE(frame.user_codes.size() == 2);
    REQUIRE(frame.user_codes[0] != frame.user_codes[1]);

    const auto code0 = ovsf_code(16, frame.user_codes[0]);
    for (std::size_t sym = 0; sym < n_chips / 16; ++sym) {
        cplx acc = 0.0;
        for (int j = 0; j < 16; ++j)
            acc += frame.chips[16 * sym + static_cast<std::size_t>(j)] *
                   static_cast<double>(code0[static_cast<std::size_t>(j)]);
        acc /= 16.0;
        CHECK(std::abs(acc - frame.user_symbols[0][sym]) < 1e-12);
    }
    // A code no user occupies despreads to zero.
    int unused = 1;
    while (unused == frame.user_codes[0] || unused == frame.user_codes[1]) ++unused;
    const auto code_u = ovsf_code(16, unused);
    for (std::size_t sym = 0; sym < n_chips / 16; ++sym) {
        cplx acc = 0.0;
        for (int j = 0; j < 16; ++j)
            acc += frame.chips[16 * sym + static_cast<std::size_t>(j)] *
                   static_cast<double>(code_u[static_cast<std::size_t>(j)]);
        CHECK(std::abs(acc) < 1e-12);
    }
}

TEST_CASE("umts occupied bandwidth matches the RRC chip spectrum") {
    WaveformConfig cfg;
    cfg.standard = StandardId::UMTS;
    cfg.num_users = 2;
    RandomStream s = stream_for(5);
    const IqBuffer x = gen_umts(cfg, s);
    const double bw = occupied_bandwidth_99(welch_psd(x, 32768));
    // 99% containment of the rolloff-0.22 chip spectrum sits near 4.15 MHz.
    CHECK(bw >= 3.9e6);
    CHECK(bw <= 4.5e6);
}

// ---- LTE / NR -----------------------------------------------------------

TEST_CASE("lte cyclic prefix pattern at the native rate") {
    const OfdmGrid g = lte_grid(0);
    CHECK(g.cp_lengths == std::vector<int>{80, 72, 72, 72, 72, 72, 72});
    CHECK(g.fft_size == 1024);
    CHECK(g.occupied == 600);
}

TEST_CASE("nr cyclic prefix pattern and 30 kHz grid") {
    const OfdmGrid g = nr_grid(0);
    REQUIRE(g.cp_lengths.size() == 14);
    CHECK(g.cp_lengths[0] == 88);
    for (std::size_t i = 1; i < 14; ++i) CHECK(g.cp_lengths[i] == 72);
    // one slot spans exactly 0.5 ms
    int slot = 0;
    for (const int cp : g.cp_lengths) slot += cp + g.fft_size;
    CHECK(slot == 15360);
}

TEST_CASE("a single occupied subcarrier is a tone at k * 15 kHz") {
    const OfdmGrid grid = lte_grid(600);
    const IqBuffer native = ofdm_modulate(
        grid, 14, [](int, int k) { return k == 30 ? cplx{1.0, 0.0} : cplx{0.0, 0.0}; });

    // Exact bin mapping on the demodulated grid: all symbol energy in bin 30.
    const Fft fft(1024);
    std::size_t pos = 0;
    for (int l = 0; l < 14; ++l) {
        pos += static_cast<std::size_t>(grid.cp_lengths[l % 7]);
        std::vector<cplx> bins(native.samples.begin() + static_cast<std::ptrdiff_t>(pos),
                               native.samples.begin() + static_cast<std::ptrdiff_t>(pos) + 1024);
        fft.forward(bins);
        for (std::size_t b = 0; b < 1024; ++b) {
            if (b == 30)
                CHECK(std::abs(bins[b]) == doctest::Approx(1.0).epsilon(1e-9));
            else
                CHECK(std::abs(bins[b]) < 1e-9);
        }
        pos += 1024;
    }

    // The long-window FFT peak sits at +450 kHz (up to CP splatter).
    std::vector<cplx> seg(native.samples.begin() + 1104,
                          native.samples.begin() + 1104 + 16384);
    const double peak_hz =
        static_cast<double>(fft_peak_bin(seg)) * 15.36e6 / 16384.0;
    CHECK(std::abs(peak_hz - 450e3) < 3e3);
}

TEST_CASE("nr subcarrier k=100 lands at +3.0 MHz") {
    const OfdmGrid grid = nr_grid(792);
    const IqBuffer x = ofdm_modulate(
        grid, 14, [](int, int k) { return k == 100 ? cplx{1.0, 0.0} : cplx{0.0, 0.0}; });
    std::vector<cplx> seg(x.samples.begin() + 1112,
                          x.samples.begin() + 1112 + 16384);
    const double peak_hz =
        static_cast<double>(fft_peak_bin(seg)) * 30.72e6 / 16384.0;
    CHECK(std::abs(peak_hz - 3.0e6) < 4e3);
}

TEST_CASE("lte loopback demod recovers the constellation with low EVM") {
    for (const int qam : {4, 16, 64}) {
        WaveformConfig cfg;
        cfg.standard = StandardId::LTE;
        cfg.qam_order = qam;
        RandomStream s = stream_for(static_cast<uint64_t>(20 + qam));
        const IqBuffer x = gen_lte(cfg, s);
        // At 30.72 MHz the grid doubles: FFT 2048, CP 160/144.
        const double evm = ofdm_evm_percent(
            x, 2048, 600, {160, 144, 144, 144, 144, 144, 144}, qam);
        CHECK(evm <= 1.0);
    }
}

TEST_CASE("nr loopback demod recovers the constellation with low EVM") {
    for (const int qam : {4, 64}) {
        WaveformConfig cfg;
        cfg.standard = StandardId::NR;
        cfg.qam_order = qam;
        RandomStream s = stream_for(static_cast<uint64_t>(30 + qam));
        const IqBuffer x = gen_nr(cfg, s);
        std::vector<int> cp(14, 72);
        cp[0] = 88;
        const double evm = ofdm_evm_percent(x, 1024, 792, cp, qam);
        CHECK(evm <= 1.0);
    }
}

TEST_CASE("ofdm PAPR and bandwidth fall in the expected windows") {
    WaveformConfig cfg;
    cfg.standard = StandardId::LTE;
    cfg.qam_order = 4;
    RandomStream s = stream_for(40);
    const IqBuffer lte = gen_lte(cfg, s);
    CHECK(papr_db(lte) >= 8.0);
    CHECK(papr_db(lte) <= 13.0);
    const double lte_bw = occupied_bandwidth_99(welch_psd(lte, 4096));
    CHECK(lte_bw >= 8.1e6);
    CHECK(lte_bw <= 9.9e6);

    cfg.standard = StandardId::NR;
    RandomStream s2 = stream_for(41);
    const IqBuffer nr = gen_nr(cfg, s2);
    CHECK(papr_db(nr) >= 8.0);
    CHECK(papr_db(nr) <= 13.0);
    const double nr_bw = occupied_bandwidth_99(welch_psd(nr, 4096));
    CHECK(nr_bw == doctest::Approx(23.76e6).epsilon(0.10));
}

TEST_CASE("lte/nr envelopes follow a Rayleigh distribution") {
    for (const StandardId id : {StandardId::LTE, StandardId::NR}) {
        WaveformConfig cfg;
        cfg.standard = id;
        cfg.qam_order = 4;
        RandomStream s = stream_for(static_cast<uint64_t>(50 + static_cast<int>(id)));
        const IqBuffer x = generate_waveform(cfg, s);

        std::vector<double> env(x.size());
        double p = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            env[i] = std::abs(x[i]);
            p += env[i] * env[i];
        }
        const double sigma2 = p / static_cast<double>(x.size()) / 2.0;
        std::sort(env.begin(), env.end());
        double ks = 0.0;
        for (std::size_t i = 0; i < env.size(); ++i) {
            const double cdf = 1.0 - std::exp(-env[i] * env[i] / (2.0 * sigma2));
            const double emp_hi = static_cast<double>(i + 1) / static_cast<double>(env.size());
            const double emp_lo = static_cast<double>(i) / static_cast<double>(env.size());
            ks = std::max({ks, std::abs(cdf - emp_hi), std::abs(cdf - emp_lo)});
        }
        CHECK(ks <= 0.05);
    }
}
