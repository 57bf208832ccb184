// SPDX-License-Identifier: Apache-2.0
#include "rfss/prng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace rfss {

const char* to_string(StreamTag tag) {
    switch (tag) {
        case StreamTag::bits: return "bits";
        case StreamTag::channel: return "channel";
        case StreamTag::impairment: return "impairment";
        case StreamTag::noise: return "noise";
        case StreamTag::scenario: return "scenario";
    }
    return "?";
}

std::array<uint32_t, 4> philox4x32_10(std::array<uint32_t, 4> c,
                                      std::array<uint32_t, 2> k) {
    constexpr uint32_t M0 = 0xD2511F53u, M1 = 0xCD9E8D57u;
    constexpr uint32_t W0 = 0x9E3779B9u, W1 = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
        const uint64_t p0 = static_cast<uint64_t>(M0) * c[0];
        const uint64_t p1 = static_cast<uint64_t>(M1) * c[2];
        c = {static_cast<uint32_t>(p1 >> 32) ^ c[1] ^ k[0],
             static_cast<uint32_t>(p1),
             static_cast<uint32_t>(p0 >> 32) ^ c[3] ^ k[1],
             static_cast<uint32_t>(p0)};
        k[0] += W0;
        k[1] += W1;
    }
    return c;
}

RandomStream::RandomStream(const SeedContext& ctx, uint32_t substream)
    : ctx_(ctx), sub_(substream) {
    if (ctx.sample_index >> 59)
        throw std::invalid_argument("RandomStream: sample_index must be < 2^59");
    key0_ = static_cast<uint32_t>(ctx.master_seed);
    key1_ = static_cast<uint32_t>(ctx.master_seed >> 32);
    word2_ = static_cast<uint32_t>(ctx.sample_index);
    word3_ = static_cast<uint32_t>(ctx.sample_index >> 32) |
             (static_cast<uint32_t>(ctx.tag) << 27);
}

void RandomStream::refill() {
    // block_ low 32 bits in word0; substream and block high bits share word1.
    const std::array<uint32_t, 4> ctr = {
        static_cast<uint32_t>(block_),
        static_cast<uint32_t>(block_ >> 32) ^ sub_, word2_, word3_};
    buf_ = philox4x32_10(ctr, {key0_, key1_});
    ++block_;
    pos_ = 0;
}

uint32_t RandomStream::next_u32() {
    if (pos_ >= 4) refill();
    return buf_[pos_++];
}

uint64_t RandomStream::next_u64() {
    const uint64_t lo = next_u32();
    const uint64_t hi = next_u32();
    return (hi << 32) | lo;
}

double RandomStream::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RandomStream::uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform();
}

double RandomStream::log_uniform(double lo, double hi) {
    if (lo <= 0.0 || hi <= 0.0)
        throw std::invalid_argument("log_uniform: bounds must be positive");
    return std::exp(uniform(std::log(lo), std::log(hi)));
}

uint64_t RandomStream::uniform_index(uint64_t n) {
    if (n == 0) throw std::invalid_argument("uniform_index: n must be > 0");
    // Rejection sampling keeps the draw exactly uniform.
    const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    uint64_t v;
    do {
        v = next_u64();
    } while (v >= limit);
    return v % n;
}

double RandomStream::normal() {
    if (has_cached_normal_) {
        has_cached_normal_ = false;
        return cached_normal_;
    }
    // Box-Muller; u1 nudged away from zero so log() stays finite.
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1 + 0x1.0p-53));
    const double a = 2.0 * std::numbers::pi * u2;
    cached_normal_ = r * std::sin(a);
    has_cached_normal_ = true;
    return r * std::cos(a);
}

std::complex<double> RandomStream::complex_normal() {
    constexpr double s = std::numbers::sqrt2 / 2.0;
    const double re = normal();
    const double im = normal();
    return {s * re, s * im};
}

RandomStream derive_stream(const SeedContext& ctx) { return RandomStream(ctx); }

}  // namespace rfss
