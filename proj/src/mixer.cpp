// SPDX-License-Identifier: Apache-2.0
#include "rfss/mixer.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace rfss {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kSourceCountWeights[3] = {0.49, 0.34, 0.17};
constexpr int kMaxTimingOffset = 3072;  // 100 us at 30.72 MHz
}  // namespace

const char* to_string(MixingMode m) {
    return m == MixingMode::co_channel ? "co_channel" : "adjacent_channel";
}

MixingMode mixing_mode_from_string(const std::string& name) {
    if (name == "co_channel") return MixingMode::co_channel;
    if (name == "adjacent_channel") return MixingMode::adjacent_channel;
    throw std::invalid_argument("unknown mixing mode: " + name);
}

double adjacent_offset_hz(StandardId id) {
    switch (id) {
        case StandardId::GSM: return -13.0e6;
        case StandardId::UMTS: return -8.0e6;
        case StandardId::LTE: return -1.0e6;
        case StandardId::NR: return 9.5e6;
    }
    throw std::invalid_argument("adjacent_offset_hz: bad standard");
}

ScenarioDraw draw_scenario(RandomStream& stream) {
    ScenarioDraw s;
    const double u = stream.uniform();
    s.num_sources = u < kSourceCountWeights[0]               ? 2
                  : u < kSourceCountWeights[0] + kSourceCountWeights[1] ? 3
                                                                        : 4;

    // Partial Fisher-Yates gives a uniform distinct subset in random order.
    std::array<StandardId, 4> pool = {StandardId::GSM, StandardId::UMTS,
                                      StandardId::LTE, StandardId::NR};
    for (int i = 0; i < s.num_sources; ++i) {
        const std::size_t j =
            static_cast<std::size_t>(i) +
            stream.uniform_index(pool.size() - static_cast<std::size_t>(i));
        std::swap(pool[static_cast<std::size_t>(i)], pool[j]);
        s.standards.push_back(pool[static_cast<std::size_t>(i)]);
    }

    s.mode = stream.uniform_index(2) == 0 ? MixingMode::co_channel
                                          : MixingMode::adjacent_channel;
    for (int i = 0; i < s.num_sources; ++i) {
        s.freq_offsets_hz.push_back(
            s.mode == MixingMode::adjacent_channel
                ? adjacent_offset_hz(s.standards[static_cast<std::size_t>(i)])
                : 0.0);
        s.powers_db.push_back(i == 0 ? 0.0 : stream.uniform(-6.0, 6.0));
        s.timing_offsets_samples.push_back(
            static_cast<int>(stream.uniform_index(kMaxTimingOffset + 1)));
        s.snr_db.push_back(stream.uniform(0.0, 30.0));
    }
    return s;
}

IqBuffer frequency_shift(const IqBuffer& x, double f_hz, double occupied_bw_hz) {
    if (std::abs(f_hz) + occupied_bw_hz / 2.0 > x.sample_rate_hz / 2.0)
        throw std::invalid_argument(
            "frequency_shift: shifted band would wrap past Nyquist");
    if (f_hz == 0.0) return x;
    IqBuffer y = x;
    const double w = kTwoPi * f_hz / x.sample_rate_hz;
    for (std::size_t n = 0; n < y.size(); ++n)
        y.samples[n] *= cplx{std::cos(w * static_cast<double>(n)),
                             std::sin(w * static_cast<double>(n))};
    return y;
}

IqBuffer cyclic_delay(const IqBuffer& x, int offset_samples) {
    if (x.empty()) return x;
    const std::size_t n = x.size();
    const std::size_t k = static_cast<std::size_t>(
        ((offset_samples % static_cast<long>(n)) + static_cast<long>(n)) %
        static_cast<long>(n));
    if (k == 0) return x;
    IqBuffer y = IqBuffer::zeros(n, x.sample_rate_hz);
    for (std::size_t i = 0; i < n; ++i) y.samples[(i + k) % n] = x.samples[i];
    return y;
}

IqBuffer assemble(const std::vector<IqBuffer>& sources_impaired,
                  const ScenarioDraw& scenario) {
    if (sources_impaired.empty())
        throw std::invalid_argument("assemble: no sources");
    if (sources_impaired.size() != static_cast<std::size_t>(scenario.num_sources))
        throw std::invalid_argument("assemble: source count mismatch");
    const std::size_t n = sources_impaired[0].size();
    const double rate = sources_impaired[0].sample_rate_hz;
    for (const auto& s : sources_impaired)
        if (s.size() != n || s.sample_rate_hz != rate)
            throw std::invalid_argument("assemble: length or rate mismatch");

    IqBuffer mix = IqBuffer::zeros(n, rate);
    for (std::size_t i = 0; i < sources_impaired.size(); ++i) {
        IqBuffer s = cyclic_delay(sources_impaired[i],
                                  scenario.timing_offsets_samples[i]);
        s = frequency_shift(s, scenario.freq_offsets_hz[i]);
        const double g = std::pow(10.0, scenario.powers_db[i] / 20.0);
        for (std::size_t k = 0; k < n; ++k) mix.samples[k] += g * s.samples[k];
    }
    return mix;
}

}  // namespace rfss
