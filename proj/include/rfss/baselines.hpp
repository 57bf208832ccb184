// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "rfss/iq_buffer.hpp"
#include "rfss/metrics.hpp"
#include "rfss/prng.hpp"

namespace rfss {

/// Hankel (time-delay) embedding: sliding 256-sample windows with hop 128,
/// each emitted as 512 interleaved real/imag features.
/// rows = floor((N - 256) / 128) + 1.
inline constexpr int kHankelWindow = 256;
inline constexpr int kHankelHop = 128;
Eigen::MatrixXd hankel_embed(const IqBuffer& x);

struct SeparationResult {
    std::vector<IqBuffer> estimates;
    bool converged = true;
    int iterations = 0;
    std::vector<double> objective;  // NMF: Frobenius objective per iteration
};

/// FastICA on the Hankel embedding: center, PCA-whiten to num_sources
/// dimensions, fixed-point iteration with the log-cosh contrast and
/// symmetric decorrelation (tol 1e-4, <= 500 iterations), then rank-one
/// back-projection and overlap-add reconstruction. num_sources == 1 returns
/// the input unchanged (nothing to separate). Non-convergence returns the
/// last iterate with converged = false.
SeparationResult fastica_separate(const IqBuffer& x, int num_sources,
                                  RandomStream& stream);

/// Frobenius-norm NMF (multiplicative updates, 500 iterations, one spectral
/// component per source) on the magnitude STFT (1024/256/Hann), followed by
/// Wiener-ratio masking of the complex mixture STFT.
SeparationResult nmf_separate(const IqBuffer& x, int num_sources,
                              RandomStream& stream);

inline constexpr int kFastIcaMaxIter = 500;
inline constexpr double kFastIcaTol = 1e-4;
inline constexpr int kNmfIterations = 500;

enum class BaselineMethod { ica, nmf };
const char* to_string(BaselineMethod m);
BaselineMethod baseline_from_string(const std::string& name);

/// Run a separator over the corpus test split, taking the first
/// n_per_count samples of each source count (2, 3, 4), scoring each with
/// PIT SI-SINR against the stored targets over the full signal length.
/// An optional crop (length, seed) scores on one random crop per sample.
struct EvalCrop {
    std::size_t length = 7680;
    uint64_t seed = 42;
};
std::vector<EvalRecord> evaluate_baseline(
    const std::string& corpus_path, BaselineMethod method, int n_per_count,
    uint64_t eval_seed, const std::optional<EvalCrop>& crop = std::nullopt);

}  // namespace rfss
