// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <string>

namespace rfss {

/// Independent random-stream families hanging off one master seed.
enum class StreamTag : uint32_t {
    bits = 0,
    channel = 1,
    impairment = 2,
    noise = 3,
    scenario = 4,
};

const char* to_string(StreamTag tag);

/// Addresses one random stream: (master_seed, sample_index, tag) always maps
/// to the same stream regardless of thread scheduling or generation order.
struct SeedContext {
    uint64_t master_seed = 0;
    uint64_t sample_index = 0;
    StreamTag tag = StreamTag::bits;
};

/// Counter-based random stream (Philox4x32-10).
///
/// The 128-bit Philox counter is laid out as
///   word0..1: 64-bit block counter (advances as the stream is consumed)
///   word2   : low 32 bits of sample_index
///   word3   : bits 59..32 of sample_index | tag in the top 5 bits
/// and the 64-bit key is the master seed, so distinct (seed, index, tag,
/// substream) tuples produce provably non-overlapping streams. sample_index
/// must stay below 2^59.
class RandomStream {
public:
    explicit RandomStream(const SeedContext& ctx, uint32_t substream = 0);

    uint32_t next_u32();
    uint64_t next_u64();

    /// Uniform on [0, 1) with 53-bit resolution.
    double uniform();
    /// Uniform on [lo, hi).
    double uniform(double lo, double hi);
    /// Log-uniform on [lo, hi]; both bounds must be positive.
    double log_uniform(double lo, double hi);
    /// Uniform integer in [0, n). n must be > 0.
    uint64_t uniform_index(uint64_t n);
    /// Standard normal via Box-Muller (pairs cached).
    double normal();
    /// Circularly-symmetric complex normal with E|z|^2 = 1.
    std::complex<double> complex_normal();

    /// A disjoint stream within the same (seed, index, tag) context.
    /// Used to give each source in a sample its own draw sequence.
    RandomStream substream(uint32_t k) const { return RandomStream(ctx_, k); }

private:
    void refill();

    SeedContext ctx_;
    uint32_t key0_, key1_;
    uint32_t word2_, word3_;
    uint64_t block_ = 0;
    uint32_t sub_ = 0;
    std::array<uint32_t, 4> buf_{};
    int pos_ = 4;
    double cached_normal_ = 0.0;
    bool has_cached_normal_ = false;
};

/// One Philox4x32-10 block; exposed for the known-answer tests.
std::array<uint32_t, 4> philox4x32_10(std::array<uint32_t, 4> counter,
                                      std::array<uint32_t, 2> key);

/// Convenience: stream for (seed, index, tag).
RandomStream derive_stream(const SeedContext& ctx);

}  // namespace rfss
