// SPDX-License-Identifier: Apache-2.0
#include "rfss/baselines.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

#include "rfss/dataset_io.hpp"
#include "rfss/stft.hpp"

namespace rfss {

const char* to_string(BaselineMethod m) {
    return m == BaselineMethod::ica ? "ica" : "nmf";
}

BaselineMethod baseline_from_string(const std::string& name) {
    if (name == "ica") return BaselineMethod::ica;
    if (name == "nmf") return BaselineMethod::nmf;
    throw std::invalid_argument("unknown baseline method: " + name);
}

Eigen::MatrixXd hankel_embed(const IqBuffer& x) {
    if (x.size() < static_cast<std::size_t>(kHankelWindow))
        throw std::invalid_argument("hankel_embed: buffer shorter than window");
    const std::size_t n_frames =
        (x.size() - kHankelWindow) / kHankelHop + 1;
    Eigen::MatrixXd rows(static_cast<Eigen::Index>(n_frames), 2 * kHankelWindow);
    for (std::size_t f = 0; f < n_frames; ++f) {
        const std::size_t start = f * kHankelHop;
        for (int m = 0; m < kHankelWindow; ++m) {
            const cplx v = x.samples[start + static_cast<std::size_t>(m)];
            rows(static_cast<Eigen::Index>(f), 2 * m) = v.real();
            rows(static_cast<Eigen::Index>(f), 2 * m + 1) = v.imag();
        }
    }
    return rows;
}

namespace {

// Inverse matrix square root of a symmetric positive-definite matrix.
Eigen::MatrixXd inv_sqrt_spd(const Eigen::MatrixXd& s) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s);
    Eigen::VectorXd d = es.eigenvalues();
    for (Eigen::Index i = 0; i < d.size(); ++i)
        d(i) = 1.0 / std::sqrt(std::max(d(i), 1e-30));
    return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().transpose();
}

Eigen::MatrixXd random_orthogonal(int k, RandomStream& stream) {
    Eigen::MatrixXd m(k, k);
    for (int r = 0; r < k; ++r)
        for (int c = 0; c < k; ++c) m(r, c) = stream.normal();
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
    Eigen::MatrixXd q = qr.householderQ();
    const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
    // Fix the sign ambiguity so the init depends only on the stream draws.
    for (int c = 0; c < k; ++c)
        if (r(c, c) < 0.0) q.col(c) = -q.col(c);
    return q;
}

// Overlap-add a per-frame rank-one reconstruction (frame weights y, complex
// window template w) back to a time series, averaging overlapped samples.
IqBuffer overlap_add_frames(const Eigen::VectorXd& y,
                            const Eigen::VectorXd& feature_template,
                            std::size_t length, double rate) {
    std::vector<cplx> window(kHankelWindow);
    for (int m = 0; m < kHankelWindow; ++m)
        window[static_cast<std::size_t>(m)] =
            cplx{feature_template(2 * m), feature_template(2 * m + 1)};

    IqBuffer out = IqBuffer::zeros(length, rate);
    std::vector<double> count(length, 0.0);
    const std::size_t n_frames = static_cast<std::size_t>(y.size());
    for (std::size_t f = 0; f < n_frames; ++f) {
        const std::size_t start = f * kHankelHop;
        for (int m = 0; m < kHankelWindow; ++m) {
            const std::size_t n = start + static_cast<std::size_t>(m);
            if (n >= length) break;
            out.samples[n] += y(static_cast<Eigen::Index>(f)) *
                              window[static_cast<std::size_t>(m)];
            count[n] += 1.0;
        }
    }
    for (std::size_t n = 0; n < length; ++n)
        if (count[n] > 0.0) out.samples[n] /= count[n];
    return out;
}

}  // namespace

SeparationResult fastica_separate(const IqBuffer& x, int num_sources,
                                  RandomStream& stream) {
    if (num_sources < 1 || num_sources > 4)
        throw std::invalid_argument("fastica_separate: num_sources must be 1..4");
    SeparationResult res;
    if (num_sources == 1) {  // nothing to separate
        res.estimates = {x};
        return res;
    }
    const int k = num_sources;
    const Eigen::MatrixXd h = hankel_embed(x);
    const Eigen::Index rows = h.rows();

    const Eigen::RowVectorXd mu = h.colwise().mean();
    const Eigen::MatrixXd xc = h.rowwise() - mu;
    const Eigen::MatrixXd cov =
        xc.transpose() * xc / static_cast<double>(rows);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
    const Eigen::Index dim = cov.rows();
    Eigen::MatrixXd basis(dim, k);        // top-k principal directions
    Eigen::VectorXd scale(k), unscale(k); // 1/sqrt(lambda), sqrt(lambda)
    for (int i = 0; i < k; ++i) {
        const Eigen::Index src = dim - 1 - i;  // eigenvalues ascend in Eigen
        const double lambda = std::max(es.eigenvalues()(src), 1e-30);
        basis.col(i) = es.eigenvectors().col(src);
        scale(i) = 1.0 / std::sqrt(lambda);
        unscale(i) = std::sqrt(lambda);
    }
    const Eigen::MatrixXd z = xc * basis * scale.asDiagonal();  // rows x k

    Eigen::MatrixXd w = random_orthogonal(k, stream);
    res.converged = false;
    for (int it = 0; it < kFastIcaMaxIter; ++it) {
        const Eigen::MatrixXd y = z * w.transpose();        // rows x k
        const Eigen::MatrixXd g = y.array().tanh();
        const Eigen::VectorXd gp_mean =
            (1.0 - g.array().square()).colwise().mean();
        Eigen::MatrixXd w_new =
            g.transpose() * z / static_cast<double>(rows) -
            gp_mean.asDiagonal() * w;
        w_new = inv_sqrt_spd(w_new * w_new.transpose()) * w_new;

        const double delta =
            ((w_new * w.transpose()).diagonal().array().abs() - 1.0)
                .abs()
                .maxCoeff();
        w = std::move(w_new);
        res.iterations = it + 1;
        if (delta < kFastIcaTol) {
            res.converged = true;
            break;
        }
    }

    const Eigen::MatrixXd y = z * w.transpose();  // component activations
    // Back-projection: pseudo-inverse of the whitened unmixing chain.
    const Eigen::MatrixXd mixing =
        basis * unscale.asDiagonal() * w.transpose();  // dim x k
    for (int i = 0; i < k; ++i)
        res.estimates.push_back(overlap_add_frames(
            y.col(i), mixing.col(i), x.size(), x.sample_rate_hz));
    return res;
}

SeparationResult nmf_separate(const IqBuffer& x, int num_sources,
                              RandomStream& stream) {
    if (num_sources < 1 || num_sources > 4)
        throw std::invalid_argument("nmf_separate: num_sources must be 1..4");
    const int k = num_sources;
    constexpr double kEps = 1e-12;

    const StftGrid grid = stft(x, 1024, 256);
    const Eigen::Index bins = grid.fft_size;
    const Eigen::Index frames = static_cast<Eigen::Index>(grid.num_frames());

    Eigen::MatrixXd v(bins, frames);
    for (Eigen::Index t = 0; t < frames; ++t)
        for (Eigen::Index b = 0; b < bins; ++b)
            v(b, t) = std::abs(grid.frames[static_cast<std::size_t>(t)]
                                          [static_cast<std::size_t>(b)]);

    // Non-negative random init scaled to the data magnitude.
    const double init_scale = std::sqrt(v.mean() / static_cast<double>(k));
    Eigen::MatrixXd w(bins, k), h(k, frames);
    for (Eigen::Index b = 0; b < bins; ++b)
        for (int c = 0; c < k; ++c)
            w(b, c) = init_scale * (stream.uniform() + 1e-3);
    for (int c = 0; c < k; ++c)
        for (Eigen::Index t = 0; t < frames; ++t)
            h(c, t) = init_scale * (stream.uniform() + 1e-3);

    SeparationResult res;
    res.objective.reserve(kNmfIterations);
    for (int it = 0; it < kNmfIterations; ++it) {
        h = (h.array() * (w.transpose() * v).array() /
             ((w.transpose() * w * h).array() + kEps))
                .matrix();
        w = (w.array() * (v * h.transpose()).array() /
             ((w * (h * h.transpose())).array() + kEps))
                .matrix();
        res.objective.push_back((v - w * h).squaredNorm());
    }
    res.iterations = kNmfIterations;

    // Wiener-ratio masks; estimates inherit the mixture phase.
    const Eigen::MatrixXd total = (w * h).array() + kEps;
    for (int c = 0; c < k; ++c) {
        const Eigen::MatrixXd part = w.col(c) * h.row(c);
        StftGrid masked = grid;
        for (Eigen::Index t = 0; t < frames; ++t)
            for (Eigen::Index b = 0; b < bins; ++b)
                masked.frames[static_cast<std::size_t>(t)]
                             [static_cast<std::size_t>(b)] *=
                    part(b, t) / total(b, t);
        res.estimates.push_back(istft(masked, x.size()));
    }
    return res;
}

namespace {

IqBuffer crop_buffer(const IqBuffer& x, std::size_t start, std::size_t len) {
    IqBuffer out;
    out.sample_rate_hz = x.sample_rate_hz;
    out.samples.assign(x.samples.begin() + static_cast<std::ptrdiff_t>(start),
                       x.samples.begin() + static_cast<std::ptrdiff_t>(start + len));
    return out;
}

}  // namespace

std::vector<EvalRecord> evaluate_baseline(const std::string& corpus_path,
                                          BaselineMethod method,
                                          int n_per_count, uint64_t eval_seed,
                                          const std::optional<EvalCrop>& crop) {
    CorpusReader reader(corpus_path);
    const SplitIndices split = split_indices({}, reader.size());

    std::vector<EvalRecord> records;
    int need[3] = {n_per_count, n_per_count, n_per_count};
    for (std::size_t idx = split.val_end; idx < split.size; ++idx) {
        if (need[0] + need[1] + need[2] == 0) break;
        const SampleMetadata meta = reader.read_metadata(idx);
        if (meta.num_sources < 2 || meta.num_sources > 4) continue;
        int& slot = need[meta.num_sources - 2];
        if (slot == 0) continue;
        --slot;

        const MixtureSample sample = reader.read_sample(idx);
        RandomStream stream(SeedContext{eval_seed, idx, StreamTag::scenario});
        const SeparationResult sep =
            method == BaselineMethod::ica
                ? fastica_separate(sample.mixture, meta.num_sources, stream)
                : nmf_separate(sample.mixture, meta.num_sources, stream);

        std::vector<IqBuffer> ests = sep.estimates;
        std::vector<IqBuffer> refs = sample.targets;
        if (crop.has_value()) {
            RandomStream pick(SeedContext{crop->seed, idx, StreamTag::scenario});
            const std::size_t start =
                pick.uniform_index(sample.mixture.size() - crop->length + 1);
            for (auto& e : ests) e = crop_buffer(e, start, crop->length);
            for (auto& r : refs) r = crop_buffer(r, start, crop->length);
        }

        EvalRecord rec;
        rec.sample_index = idx;
        auto [best, perm] = pit_si_sinr(ests, refs);
        rec.pi_si_sinr_db = best;
        rec.permutation = perm;
        for (std::size_t j = 0; j < refs.size(); ++j)
            rec.per_source_si_sinr_db.push_back(
                si_sinr_db(ests[static_cast<std::size_t>(perm[j])], refs[j]));
        rec.mode = meta.mixing_mode;
        rec.num_sources = meta.num_sources;
        double snr_mean = 0.0;
        for (const double s : meta.snr_db) snr_mean += s;
        snr_mean /= static_cast<double>(meta.snr_db.size());
        rec.snr_bin = snr_bin_of(snr_mean);
        records.push_back(std::move(rec));
    }
    return records;
}

}  // namespace rfss
