// SPDX-License-Identifier: Apache-2.0
#include "rfss/waveforms.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "rfss/fft.hpp"
#include "rfss/filter_design.hpp"
#include "rfss/resample.hpp"

namespace rfss {

namespace {
constexpr double kPi = std::numbers::pi;

// GSM timing: 270.833 ksps modulated at 16 samples/symbol (13/3 MHz), then
// 48/13 -> 16 MHz and 48/25 -> 30.72 MHz. The single-stage ratio (2304/325)
// would exceed the resampler's small-rational budget.
constexpr int kGsmSpb = 16;
constexpr double kGsmNativeRate = 13e6 / 3.0;
constexpr std::size_t kGsmTrimLead = 512;  // past both resampler transients

constexpr int kUmtsSpreadingFactor = 16;
constexpr int kUmtsSamplesPerChip = 8;
constexpr double kUmtsChipRate = 3.84e6;
constexpr std::size_t kUmtsTrimLead = 512;

constexpr int kLteMaxOccupied = 600;
constexpr int kNrMaxOccupied = 960;
constexpr int kNrDefaultOccupied = 792;
}  // namespace

const char* to_string(StandardId id) {
    switch (id) {
        case StandardId::GSM: return "GSM";
        case StandardId::UMTS: return "UMTS";
        case StandardId::LTE: return "LTE";
        case StandardId::NR: return "NR";
    }
    return "?";
}

StandardId standard_from_string(const std::string& name) {
    if (name == "GSM") return StandardId::GSM;
    if (name == "UMTS") return StandardId::UMTS;
    if (name == "LTE") return StandardId::LTE;
    if (name == "NR") return StandardId::NR;
    throw std::invalid_argument("unknown standard: " + name);
}

IqBuffer generate_waveform(const WaveformConfig& cfg, RandomStream& stream) {
    switch (cfg.standard) {
        case StandardId::GSM: return gen_gsm(cfg, stream);
        case StandardId::UMTS: return gen_umts(cfg, stream);
        case StandardId::LTE: return gen_lte(cfg, stream);
        case StandardId::NR: return gen_nr(cfg, stream);
    }
    throw std::invalid_argument("generate_waveform: bad standard");
}

// ---- GSM -------------------------------------------------------------

std::size_t gsm_symbol_count(std::size_t duration_samples) {
    // native samples needed = duration * 325/2304, plus trim margins.
    const std::size_t native =
        ((duration_samples + 2 * kGsmTrimLead) * 325 + 2303) / 2304;
    return native / kGsmSpb + 8;
}

IqBuffer gsm_modulate(const std::vector<int>& symbols,
                      std::size_t duration_samples) {
    if (duration_samples == 0)
        throw std::invalid_argument("gsm_modulate: empty duration");
    if (symbols.size() < gsm_symbol_count(duration_samples))
        throw std::invalid_argument("gsm_modulate: too few symbols for duration");

    const auto pulse = design_filter(
        {FilterKind::gaussian_gmsk, 0.3, 3, kGsmSpb});

    // Frequency signal: superposed Gaussian pulses, one per symbol.
    const std::size_t n_native = symbols.size() * kGsmSpb + pulse.size();
    std::vector<double> freq(n_native, 0.0);
    for (std::size_t k = 0; k < symbols.size(); ++k) {
        const double a = static_cast<double>(symbols[k]);
        for (std::size_t t = 0; t < pulse.size(); ++t)
            freq[k * kGsmSpb + t] += a * pulse[t];
    }

    // Phase integration with modulation index h = 0.5; constant envelope.
    std::vector<cplx> native(n_native);
    double phase = 0.0;
    for (std::size_t n = 0; n < n_native; ++n) {
        phase += kPi * 0.5 * freq[n];
        native[n] = {std::cos(phase), std::sin(phase)};
    }

    static const Resampler stage1(48, 13);  // 13/3 MHz -> 16 MHz
    static const Resampler stage2(48, 25);  // 16 MHz -> 30.72 MHz
    IqBuffer x(std::move(native), kGsmNativeRate);
    x = stage1.process(x);
    x = stage2.process(x);

    if (x.size() < kGsmTrimLead + duration_samples)
        throw std::runtime_error("gsm_modulate: internal margin too small");
    IqBuffer out;
    out.sample_rate_hz = kCommonRateHz;
    out.samples.assign(x.samples.begin() + kGsmTrimLead,
                       x.samples.begin() + kGsmTrimLead + duration_samples);
    normalize_power(out);
    return out;
}

IqBuffer gen_gsm(const WaveformConfig& cfg, RandomStream& stream) {
    if (cfg.standard != StandardId::GSM)
        throw std::invalid_argument("gen_gsm: wrong standard in config");
    const std::size_t n_sym = gsm_symbol_count(cfg.duration_samples);
    std::vector<int> symbols(n_sym);
    int prev = 0;
    for (std::size_t k = 0; k < n_sym; ++k) {
        const int bit = static_cast<int>(stream.next_u32() & 1u);
        const int enc = bit ^ prev;  // differential encoding
        prev = bit;
        symbols[k] = 1 - 2 * enc;
    }
    return gsm_modulate(symbols, cfg.duration_samples);
}

// ---- UMTS ------------------------------------------------------------

std::vector<int> ovsf_code(int sf, int index) {
    if (sf < 1 || (sf & (sf - 1)) != 0)
        throw std::invalid_argument("ovsf_code: SF must be a power of two");
    if (index < 0 || index >= sf)
        throw std::invalid_argument("ovsf_code: index out of range");
    if (sf == 1) return {1};
    // Children of tree node n are (c, c) at 2n and (c, -c) at 2n+1.
    const std::vector<int> parent = ovsf_code(sf / 2, index / 2);
    std::vector<int> code(static_cast<std::size_t>(sf));
    const bool invert = (index & 1) != 0;
    for (int i = 0; i < sf / 2; ++i) {
        code[static_cast<std::size_t>(i)] = parent[static_cast<std::size_t>(i)];
        code[static_cast<std::size_t>(sf / 2 + i)] =
            invert ? -parent[static_cast<std::size_t>(i)]
                   : parent[static_cast<std::size_t>(i)];
    }
    return code;
}

std::vector<cplx> umts_scrambling_sequence(int code_number, std::size_t length) {
    constexpr int kPeriod = (1 << 18) - 1;
    if (code_number < 0 || code_number >= kPeriod)
        throw std::invalid_argument("umts_scrambling_sequence: bad code number");

    // TS 25.213 5.2.2: x from 1 + X^7 + X^18, y from 1 + X^5 + X^7 + X^10 + X^18.
    std::vector<uint8_t> x(kPeriod), y(kPeriod);
    x[0] = 1;
    for (int i = 1; i < 18; ++i) x[i] = 0;
    for (int i = 0; i < 18; ++i) y[i] = 1;
    for (int i = 0; i + 18 < kPeriod; ++i) {
        x[i + 18] = static_cast<uint8_t>(x[i + 7] ^ x[i]);
        y[i + 18] = static_cast<uint8_t>(y[i + 10] ^ y[i + 7] ^ y[i + 5] ^ y[i]);
    }

    std::vector<cplx> seq(length);
    for (std::size_t i = 0; i < length; ++i) {
        const int zi = x[(i + code_number) % kPeriod] ^ y[i % kPeriod];
        const std::size_t q = (i + 131072) % kPeriod;
        const int zq = x[(q + code_number) % kPeriod] ^ y[q];
        seq[i] = {zi ? -1.0 : 1.0, zq ? -1.0 : 1.0};
    }
    return seq;
}

UmtsChips build_umts_chips(int num_users, std::size_t n_chips, bool scramble,
                           RandomStream& stream) {
    if (num_users < 1 || num_users > 8)
        throw std::invalid_argument("build_umts_chips: num_users must be 1..8");
    UmtsChips out;

    // Primary downlink scrambling codes are n = 16 * i, i in [0, 512).
    out.scrambling_index = 16 * static_cast<int>(stream.uniform_index(512));

    // Distinct channelization codes, skipping index 0 (common channels).
    std::vector<int> pool;
    for (int i = 1; i < kUmtsSpreadingFactor; ++i) pool.push_back(i);
    for (std::size_t i = pool.size(); i > 1; --i) {
        const std::size_t j = stream.uniform_index(i);
        std::swap(pool[i - 1], pool[j]);
    }
    out.user_codes.assign(pool.begin(), pool.begin() + num_users);

    const std::size_t n_symbols =
        (n_chips + kUmtsSpreadingFactor - 1) / kUmtsSpreadingFactor;
    constexpr double rsqrt2 = 0.7071067811865476;
    out.user_symbols.resize(num_users);
    out.chips.assign(n_chips, 0.0);
    for (int u = 0; u < num_users; ++u) {
        auto& syms = out.user_symbols[u];
        syms.resize(n_symbols);
        for (auto& d : syms) {
            const double re = (stream.next_u32() & 1u) ? -rsqrt2 : rsqrt2;
            const double im = (stream.next_u32() & 1u) ? -rsqrt2 : rsqrt2;
            d = {re, im};
        }
        const auto code = ovsf_code(kUmtsSpreadingFactor, out.user_codes[u]);
        for (std::size_t c = 0; c < n_chips; ++c)
            out.chips[c] += syms[c / kUmtsSpreadingFactor] *
                            static_cast<double>(code[c % kUmtsSpreadingFactor]);
    }
    if (scramble) {
        const auto scr = umts_scrambling_sequence(out.scrambling_index, n_chips);
        for (std::size_t c = 0; c < n_chips; ++c)
            out.chips[c] *= scr[c] * rsqrt2;
    }
    return out;
}

IqBuffer gen_umts(const WaveformConfig& cfg, RandomStream& stream) {
    if (cfg.standard != StandardId::UMTS)
        throw std::invalid_argument("gen_umts: wrong standard in config");
    if (cfg.num_users < 1 || cfg.num_users > 8)
        throw std::invalid_argument("gen_umts: num_users must be 1..8");
    if (cfg.duration_samples == 0)
        throw std::invalid_argument("gen_umts: empty duration");

    const std::size_t n_chips =
        (cfg.duration_samples + 2 * kUmtsTrimLead) / kUmtsSamplesPerChip + 32;
    const UmtsChips frame =
        build_umts_chips(cfg.num_users, n_chips, /*scramble=*/true, stream);

    static const std::vector<double> rrc = design_filter(
        {FilterKind::root_raised_cosine, 0.22, 12, kUmtsSamplesPerChip});

    // Pulse-shape directly at 8 samples/chip = 30.72 MHz.
    std::vector<cplx> shaped(n_chips * kUmtsSamplesPerChip + rrc.size(), 0.0);
    for (std::size_t c = 0; c < n_chips; ++c) {
        const cplx v = frame.chips[c];
        const std::size_t base = c * kUmtsSamplesPerChip;
        for (std::size_t t = 0; t < rrc.size(); ++t) shaped[base + t] += v * rrc[t];
    }

    IqBuffer out;
    out.sample_rate_hz = kCommonRateHz;
    out.samples.assign(shaped.begin() + kUmtsTrimLead,
                       shaped.begin() + kUmtsTrimLead + cfg.duration_samples);
    normalize_power(out);
    return out;
}

// ---- OFDM (LTE / NR) ---------------------------------------------------

OfdmGrid lte_grid(int occupied_subcarriers) {
    OfdmGrid g;
    g.fft_size = 1024;
    g.occupied = occupied_subcarriers > 0 ? occupied_subcarriers : kLteMaxOccupied;
    // TS 36.211 Table 6.12-1 ratios (160/2048, 144/2048) at FFT 1024.
    g.cp_lengths = {80, 72, 72, 72, 72, 72, 72};
    g.native_rate_hz = 15.36e6;
    return g;
}

OfdmGrid nr_grid(int occupied_subcarriers) {
    OfdmGrid g;
    g.fft_size = 1024;
    g.occupied = occupied_subcarriers > 0 ? occupied_subcarriers : kNrDefaultOccupied;
    // TS 38.211 Table 5.3.1-2 ratios for mu=1 normal CP at FFT 1024:
    // 144*64/2 + 16*64 Tc = 88 samples on the first symbol of each slot.
    g.cp_lengths.assign(14, 72);
    g.cp_lengths[0] = 88;
    g.native_rate_hz = kCommonRateHz;
    return g;
}

cplx draw_qam(int order, RandomStream& stream) {
    switch (order) {
        case 4: {
            constexpr double s = 0.7071067811865476;
            return {(stream.next_u32() & 1u) ? -s : s,
                    (stream.next_u32() & 1u) ? -s : s};
        }
        case 16: {
            constexpr double s = 1.0 / 3.1622776601683795;  // 1/sqrt(10)
            const int i = static_cast<int>(stream.uniform_index(4));
            const int q = static_cast<int>(stream.uniform_index(4));
            return {s * (2 * i - 3), s * (2 * q - 3)};
        }
        case 64: {
            const double s = 1.0 / std::sqrt(42.0);
            const int i = static_cast<int>(stream.uniform_index(8));
            const int q = static_cast<int>(stream.uniform_index(8));
            return {s * (2 * i - 7), s * (2 * q - 7)};
        }
        default:
            throw std::invalid_argument("draw_qam: order must be 4, 16 or 64");
    }
}

namespace {

// Logical subcarrier k (split across DC, DC excluded) -> FFT bin.
int subcarrier_bin(int k, int fft_size) {
    return k >= 0 ? k : fft_size + k;
}

std::vector<int> occupied_subcarriers_list(int occupied) {
    std::vector<int> ks;
    ks.reserve(occupied);
    for (int k = -occupied / 2; k <= occupied / 2; ++k)
        if (k != 0) ks.push_back(k);
    return ks;
}

}  // namespace

IqBuffer ofdm_modulate(const OfdmGrid& grid, int n_symbols,
                       const std::function<cplx(int, int)>& symbol_at) {
    if (grid.occupied <= 0 || grid.occupied % 2 != 0 ||
        grid.occupied >= grid.fft_size)
        throw std::invalid_argument("ofdm_modulate: bad occupied subcarrier count");
    const Fft fft(static_cast<std::size_t>(grid.fft_size));
    const auto ks = occupied_subcarriers_list(grid.occupied);

    std::size_t total = 0;
    for (int l = 0; l < n_symbols; ++l)
        total += static_cast<std::size_t>(grid.fft_size) +
                 static_cast<std::size_t>(grid.cp_lengths[l % grid.cp_lengths.size()]);

    IqBuffer out;
    out.sample_rate_hz = grid.native_rate_hz;
    out.samples.reserve(total);
    std::vector<cplx> bins(static_cast<std::size_t>(grid.fft_size));
    for (int l = 0; l < n_symbols; ++l) {
        std::fill(bins.begin(), bins.end(), cplx{0.0, 0.0});
        for (const int k : ks)
            bins[static_cast<std::size_t>(subcarrier_bin(k, grid.fft_size))] =
                symbol_at(l, k);
        fft.inverse(bins);
        const int cp = grid.cp_lengths[l % grid.cp_lengths.size()];
        out.samples.insert(out.samples.end(), bins.end() - cp, bins.end());
        out.samples.insert(out.samples.end(), bins.begin(), bins.end());
    }
    return out;
}

double ofdm_evm_percent(const IqBuffer& x, int fft_size, int occupied,
                        const std::vector<int>& cp_lengths, int qam_order) {
    const Fft fft(static_cast<std::size_t>(fft_size));
    const auto ks = occupied_subcarriers_list(occupied);

    std::vector<cplx> cloud;
    std::size_t pos = 0;
    int l = 0;
    std::vector<cplx> bins(static_cast<std::size_t>(fft_size));
    while (true) {
        const std::size_t cp = static_cast<std::size_t>(
            cp_lengths[static_cast<std::size_t>(l) % cp_lengths.size()]);
        if (pos + cp + static_cast<std::size_t>(fft_size) > x.size()) break;
        pos += cp;
        std::copy(x.samples.begin() + static_cast<std::ptrdiff_t>(pos),
                  x.samples.begin() + static_cast<std::ptrdiff_t>(pos) + fft_size,
                  bins.begin());
        fft.forward(bins);
        for (const int k : ks)
            cloud.push_back(bins[static_cast<std::size_t>(subcarrier_bin(k, fft_size))]);
        pos += static_cast<std::size_t>(fft_size);
        ++l;
    }
    if (cloud.empty())
        throw std::invalid_argument("ofdm_evm_percent: buffer shorter than one symbol");

    double p = 0.0;
    for (const cplx& v : cloud) p += std::norm(v);
    p /= static_cast<double>(cloud.size());
    const double g = 1.0 / std::sqrt(p);

    // Nearest ideal point on the unit-mean-energy square constellation.
    const int side = qam_order == 4 ? 2 : (qam_order == 16 ? 4 : 8);
    const double scale = qam_order == 4 ? 0.7071067811865476
                       : qam_order == 16 ? 1.0 / 3.1622776601683795
                                         : 1.0 / std::sqrt(42.0);
    auto slice = [&](double v) {
        int level = static_cast<int>(std::lround((v / scale + (side - 1)) / 2.0));
        level = std::max(0, std::min(side - 1, level));
        return scale * (2 * level - (side - 1));
    };

    double err = 0.0;
    for (const cplx& v : cloud) {
        const cplx n = v * g;
        const cplx ideal{slice(n.real()), slice(n.imag())};
        err += std::norm(n - ideal);
    }
    err /= static_cast<double>(cloud.size());
    return 100.0 * std::sqrt(err);
}

IqBuffer gen_lte(const WaveformConfig& cfg, RandomStream& stream) {
    if (cfg.standard != StandardId::LTE)
        throw std::invalid_argument("gen_lte: wrong standard in config");
    if (cfg.occupied_subcarriers > kLteMaxOccupied)
        throw std::invalid_argument("gen_lte: occupied_subcarriers > 600");
    if (cfg.duration_samples == 0)
        throw std::invalid_argument("gen_lte: empty duration");

    const OfdmGrid grid = lte_grid(cfg.occupied_subcarriers);
    const int qam = cfg.qam_order;

    // One lead slot absorbs the resampler transient and keeps the output
    // aligned to a slot boundary; one tail slot covers the trailing edge.
    constexpr std::size_t kSlotNative = 7680;
    const std::size_t data_slots =
        (cfg.duration_samples + 2 * kSlotNative - 1) / (2 * kSlotNative);
    const int n_slots = static_cast<int>(data_slots) + 2;

    IqBuffer native = ofdm_modulate(
        grid, 7 * n_slots,
        [&](int, int) { return draw_qam(qam, stream); });

    static const Resampler doubler(2, 1);
    IqBuffer wide = doubler.process(native);

    const std::size_t lead = 2 * kSlotNative;
    IqBuffer out;
    out.sample_rate_hz = kCommonRateHz;
    out.samples.assign(wide.samples.begin() + lead,
                       wide.samples.begin() + lead + cfg.duration_samples);
    normalize_power(out);
    return out;
}

IqBuffer gen_nr(const WaveformConfig& cfg, RandomStream& stream) {
    if (cfg.standard != StandardId::NR)
        throw std::invalid_argument("gen_nr: wrong standard in config");
    if (cfg.numerology_mu != 1)
        throw std::invalid_argument("gen_nr: numerology_mu must be 1");
    if (cfg.occupied_subcarriers > kNrMaxOccupied)
        throw std::invalid_argument("gen_nr: occupied_subcarriers > 960 (alias guard)");
    if (cfg.duration_samples == 0)
        throw std::invalid_argument("gen_nr: empty duration");

    const OfdmGrid grid = nr_grid(cfg.occupied_subcarriers);
    const int qam = cfg.qam_order;

    constexpr std::size_t kSlotSamples = 15360;
    const int n_slots = static_cast<int>(
        (cfg.duration_samples + kSlotSamples - 1) / kSlotSamples);

    IqBuffer full = ofdm_modulate(
        grid, 14 * n_slots,
        [&](int, int) { return draw_qam(qam, stream); });

    IqBuffer out;
    out.sample_rate_hz = kCommonRateHz;
    out.samples.assign(full.samples.begin(),
                       full.samples.begin() + cfg.duration_samples);
    normalize_power(out);
    return out;
}

}  // namespace rfss
