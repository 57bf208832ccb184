// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <string>

#include "rfss/pipeline.hpp"

namespace rfss {

enum class Backend { hdf5, manifest };

const char* to_string(Backend b);
Backend backend_from_string(const std::string& name);

/// Corpus shape parameters. Complex values are stored as float32
/// (real, imag) pairs; per-sample chunks are deflate-compressed.
struct CorpusLayout {
    std::size_t corpus_size = 0;
    std::size_t sample_length = 122880;
    int max_sources = 4;
    int deflate_level = 6;
};

/// 70/15/15 split boundaries (ceil at the edges, matching the full-scale
/// 70,000 / 85,000 boundaries at N = 100,000).
struct SplitSpec {
    int train_num = 70, val_num = 15, test_num = 15;  // out of 100
};

struct SplitIndices {
    std::size_t train_end = 0;  // train = [0, train_end)
    std::size_t val_end = 0;    // val = [train_end, val_end), test = rest
    std::size_t size = 0;
};

SplitIndices split_indices(const SplitSpec& spec, std::size_t corpus_size);

/// Sequential single-owner corpus writer. Rows must arrive with contiguous
/// ascending indices starting at 0; finalize() may be called early, leaving
/// a truncated-but-valid corpus.
class CorpusWriter {
public:
    struct Summary {
        std::size_t samples_written = 0;
        uint32_t digest_crc32 = 0;
        uint64_t bytes = 0;
    };

    CorpusWriter(const std::string& path, Backend backend,
                 const CorpusLayout& layout);
    ~CorpusWriter();
    CorpusWriter(const CorpusWriter&) = delete;
    CorpusWriter& operator=(const CorpusWriter&) = delete;

    void write(std::size_t index, const MixtureSample& sample);
    Summary finalize();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Random-access reader over either backend (detected from the path).
class CorpusReader {
public:
    explicit CorpusReader(const std::string& path);
    ~CorpusReader();
    CorpusReader(const CorpusReader&) = delete;
    CorpusReader& operator=(const CorpusReader&) = delete;

    std::size_t size() const;
    std::size_t sample_length() const;
    int max_sources() const;
    bool has_metadata() const;

    SampleMetadata read_metadata(std::size_t index) const;
    int32_t read_signal_length(std::size_t index) const;

    /// One full row; targets trimmed to metadata.num_sources.
    MixtureSample read_sample(std::size_t index) const;

    /// First `count` source slots (no metadata needed); used to align
    /// externally produced estimate containers with the corpus.
    std::vector<IqBuffer> read_source_slots(std::size_t index, int count) const;

    IqBuffer read_mixture(std::size_t index) const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// CRC-32 over the container's payload files (deterministic file order);
/// the digest the generate command prints for determinism checks.
uint32_t corpus_digest(const std::string& path);

}  // namespace rfss
