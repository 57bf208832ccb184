// SPDX-License-Identifier: Apache-2.0
#include "rfss/dataset_io.hpp"

#include <hdf5.h>
#include <zlib.h>

#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <stdexcept>

namespace rfss {

namespace fs = std::filesystem;
using nlohmann::json;

const char* to_string(Backend b) {
    return b == Backend::hdf5 ? "hdf5" : "manifest";
}

Backend backend_from_string(const std::string& name) {
    if (name == "hdf5") return Backend::hdf5;
    if (name == "manifest") return Backend::manifest;
    throw std::invalid_argument("unknown backend: " + name);
}

SplitIndices split_indices(const SplitSpec& spec, std::size_t corpus_size) {
    if (corpus_size == 0)
        throw std::invalid_argument("split_indices: empty corpus");
    if (spec.train_num + spec.val_num + spec.test_num != 100)
        throw std::invalid_argument("split_indices: fractions must sum to 100");
    SplitIndices out;
    out.size = corpus_size;
    // ceil(num * N / 100), in integer arithmetic
    const auto b = [&](int num) {
        return (static_cast<std::size_t>(num) * corpus_size + 99) / 100;
    };
    out.train_end = b(spec.train_num);
    out.val_end = b(spec.train_num + spec.val_num);
    return out;
}

namespace {

constexpr const char* kDsMixed = "mixed_signals";
constexpr const char* kDsSources = "source_signals";
constexpr const char* kDsLengths = "signal_lengths";
constexpr const char* kDsMetadata = "metadata";

void to_f32_pairs(const std::vector<cplx>& v, float* out) {
    for (std::size_t i = 0; i < v.size(); ++i) {
        out[2 * i] = static_cast<float>(v[i].real());
        out[2 * i + 1] = static_cast<float>(v[i].imag());
    }
}

std::vector<cplx> from_f32_pairs(const float* data, std::size_t n) {
    std::vector<cplx> v(n);
    for (std::size_t i = 0; i < n; ++i)
        v[i] = {static_cast<double>(data[2 * i]),
                static_cast<double>(data[2 * i + 1])};
    return v;
}

uint32_t crc32_file(const fs::path& p, uint32_t crc) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for digest: " + p.string());
    std::vector<char> buf(1 << 20);
    while (in) {
        in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
        const std::streamsize got = in.gcount();
        if (got > 0)
            crc = ::crc32(crc, reinterpret_cast<const Bytef*>(buf.data()),
                          static_cast<uInt>(got));
    }
    return crc;
}

std::vector<unsigned char> deflate_frame(const unsigned char* src,
                                         std::size_t len, int level) {
    uLongf bound = compressBound(static_cast<uLong>(len));
    std::vector<unsigned char> out(bound);
    if (compress2(out.data(), &bound, src, static_cast<uLong>(len), level) != Z_OK)
        throw std::runtime_error("deflate failed");
    out.resize(bound);
    return out;
}

std::vector<unsigned char> inflate_frame(const unsigned char* src,
                                         std::size_t len,
                                         std::size_t expected) {
    std::vector<unsigned char> out(expected);
    uLongf got = static_cast<uLongf>(expected);
    if (uncompress(out.data(), &got, src, static_cast<uLong>(len)) != Z_OK ||
        got != expected)
        throw std::runtime_error("inflate failed or size mismatch");
    return out;
}

// ---- HDF5 helpers ------------------------------------------------------

struct H5Handle {
    hid_t id = H5I_INVALID_HID;
    herr_t (*closer)(hid_t) = nullptr;
    H5Handle() = default;
    H5Handle(hid_t i, herr_t (*c)(hid_t)) : id(i), closer(c) {
        if (i < 0) throw std::runtime_error("HDF5 call failed");
    }
    ~H5Handle() { reset(); }
    H5Handle(H5Handle&& o) noexcept : id(o.id), closer(o.closer) {
        o.id = H5I_INVALID_HID;
    }
    H5Handle& operator=(H5Handle&& o) noexcept {
        reset();
        id = o.id;
        closer = o.closer;
        o.id = H5I_INVALID_HID;
        return *this;
    }
    void reset() {
        if (id >= 0 && closer) closer(id);
        id = H5I_INVALID_HID;
    }
    operator hid_t() const { return id; }
};

hid_t make_complex_file_type() {
    const hid_t t = H5Tcreate(H5T_COMPOUND, 8);
    H5Tinsert(t, "r", 0, H5T_IEEE_F32LE);
    H5Tinsert(t, "i", 4, H5T_IEEE_F32LE);
    return t;
}

hid_t make_complex_mem_type() {
    const hid_t t = H5Tcreate(H5T_COMPOUND, 8);
    H5Tinsert(t, "r", 0, H5T_NATIVE_FLOAT);
    H5Tinsert(t, "i", 4, H5T_NATIVE_FLOAT);
    return t;
}

hid_t make_vlen_string_type() {
    const hid_t t = H5Tcopy(H5T_C_S1);
    H5Tset_size(t, H5T_VARIABLE);
    H5Tset_cset(t, H5T_CSET_UTF8);
    return t;
}

void write_string_attr(hid_t loc, const char* name, const std::string& value) {
    H5Handle space(H5Screate(H5S_SCALAR), H5Sclose);
    H5Handle type(H5Tcopy(H5T_C_S1), H5Tclose);
    H5Tset_size(type, value.size() + 1);
    H5Handle attr(H5Acreate2(loc, name, type, space, H5P_DEFAULT, H5P_DEFAULT),
                  H5Aclose);
    H5Awrite(attr, type, value.c_str());
}

void write_double_attr(hid_t loc, const char* name, double value) {
    H5Handle space(H5Screate(H5S_SCALAR), H5Sclose);
    H5Handle attr(H5Acreate2(loc, name, H5T_IEEE_F64LE, space, H5P_DEFAULT,
                             H5P_DEFAULT),
                  H5Aclose);
    H5Awrite(attr, H5T_NATIVE_DOUBLE, &value);
}

}  // namespace

// ---- Writer ------------------------------------------------------------

struct CorpusWriter::Impl {
    Backend backend;
    CorpusLayout layout;
    std::string path;
    std::size_t next_index = 0;
    bool finalized = false;

    // hdf5
    H5Handle file;
    H5Handle ds_mixed, ds_sources, ds_lengths, ds_meta;
    H5Handle ctype_file, ctype_mem, str_type;

    // manifest
    struct Shard {
        std::ofstream bin;
        std::vector<uint64_t> offsets{0};
        fs::path bin_path, idx_path;
    };
    Shard sh_mixed, sh_sources, sh_lengths, sh_meta;

    std::vector<float> stage_mixed, stage_sources;

    void open_hdf5() {
        H5Handle fapl(H5Pcreate(H5P_FILE_ACCESS), H5Pclose);
        file = H5Handle(
            H5Fcreate(path.c_str(), H5F_ACC_TRUNC, H5P_DEFAULT, fapl), H5Fclose);
        ctype_file = H5Handle(make_complex_file_type(), H5Tclose);
        ctype_mem = H5Handle(make_complex_mem_type(), H5Tclose);
        str_type = H5Handle(make_vlen_string_type(), H5Tclose);

        const hsize_t n = layout.corpus_size;
        const hsize_t len = layout.sample_length;
        const hsize_t slots = static_cast<hsize_t>(layout.max_sources);

        auto dcpl_for = [&](std::initializer_list<hsize_t> chunk) {
            H5Handle dcpl(H5Pcreate(H5P_DATASET_CREATE), H5Pclose);
            std::vector<hsize_t> dims(chunk);
            H5Pset_chunk(dcpl, static_cast<int>(dims.size()), dims.data());
            H5Pset_deflate(dcpl, static_cast<unsigned>(layout.deflate_level));
            H5Pset_obj_track_times(dcpl, false);
            return dcpl;
        };

        {
            const hsize_t dims[2] = {n, len};
            H5Handle space(H5Screate_simple(2, dims, nullptr), H5Sclose);
            H5Handle dcpl = dcpl_for({1, len});
            ds_mixed = H5Handle(H5Dcreate2(file, kDsMixed, ctype_file, space,
                                           H5P_DEFAULT, dcpl, H5P_DEFAULT),
                                H5Dclose);
        }
        {
            const hsize_t dims[3] = {n, slots, len};
            H5Handle space(H5Screate_simple(3, dims, nullptr), H5Sclose);
            H5Handle dcpl = dcpl_for({1, 1, len});
            ds_sources = H5Handle(H5Dcreate2(file, kDsSources, ctype_file, space,
                                             H5P_DEFAULT, dcpl, H5P_DEFAULT),
                                  H5Dclose);
        }
        {
            const hsize_t dims[1] = {n};
            H5Handle space(H5Screate_simple(1, dims, nullptr), H5Sclose);
            H5Handle dcpl = dcpl_for({std::min<hsize_t>(n, 16384)});
            ds_lengths = H5Handle(
                H5Dcreate2(file, kDsLengths, H5T_STD_I32LE, space, H5P_DEFAULT,
                           dcpl, H5P_DEFAULT),
                H5Dclose);
        }
        {
            const hsize_t dims[1] = {n};
            H5Handle space(H5Screate_simple(1, dims, nullptr), H5Sclose);
            H5Handle dcpl = dcpl_for({std::min<hsize_t>(n, 1024)});
            ds_meta = H5Handle(H5Dcreate2(file, kDsMetadata, str_type, space,
                                          H5P_DEFAULT, dcpl, H5P_DEFAULT),
                               H5Dclose);
        }
        write_string_attr(ds_mixed, "complex_storage",
                          "compound {r: float32, i: float32} (h5py complex64)");
        write_double_attr(ds_mixed, "sample_rate_hz", kCommonRateHz);
    }

    void open_manifest() {
        fs::create_directories(path);
        auto open_shard = [&](Shard& s, const char* name) {
            s.bin_path = fs::path(path) / (std::string(name) + ".bin");
            s.idx_path = fs::path(path) / (std::string(name) + ".idx");
            s.bin.open(s.bin_path, std::ios::binary | std::ios::trunc);
            if (!s.bin)
                throw std::runtime_error("cannot create shard: " + s.bin_path.string());
        };
        open_shard(sh_mixed, kDsMixed);
        open_shard(sh_sources, kDsSources);
        open_shard(sh_lengths, kDsLengths);
        open_shard(sh_meta, kDsMetadata);
    }

    void append_frame(Shard& s, const unsigned char* data, std::size_t len) {
        const auto frame = deflate_frame(data, len, layout.deflate_level);
        s.bin.write(reinterpret_cast<const char*>(frame.data()),
                    static_cast<std::streamsize>(frame.size()));
        s.offsets.push_back(s.offsets.back() + frame.size());
    }

    void write_hdf5_row(std::size_t index, const MixtureSample& sample) {
        const hsize_t len = layout.sample_length;
        const hsize_t slots = static_cast<hsize_t>(layout.max_sources);
        // mixed
        {
            H5Handle fspace(H5Dget_space(ds_mixed), H5Sclose);
            const hsize_t start[2] = {index, 0};
            const hsize_t count[2] = {1, len};
            H5Sselect_hyperslab(fspace, H5S_SELECT_SET, start, nullptr, count,
                                nullptr);
            const hsize_t mdims[1] = {len};
            H5Handle mspace(H5Screate_simple(1, mdims, nullptr), H5Sclose);
            if (H5Dwrite(ds_mixed, ctype_mem, mspace, fspace, H5P_DEFAULT,
                         stage_mixed.data()) < 0)
                throw std::runtime_error("HDF5 write failed (mixed_signals)");
        }
        // sources (whole zero-padded row in one call)
        {
            H5Handle fspace(H5Dget_space(ds_sources), H5Sclose);
            const hsize_t start[3] = {index, 0, 0};
            const hsize_t count[3] = {1, slots, len};
            H5Sselect_hyperslab(fspace, H5S_SELECT_SET, start, nullptr, count,
                                nullptr);
            const hsize_t mdims[1] = {slots * len};
            H5Handle mspace(H5Screate_simple(1, mdims, nullptr), H5Sclose);
            if (H5Dwrite(ds_sources, ctype_mem, mspace, fspace, H5P_DEFAULT,
                         stage_sources.data()) < 0)
                throw std::runtime_error("HDF5 write failed (source_signals)");
        }
        // length + metadata
        {
            H5Handle fspace(H5Dget_space(ds_lengths), H5Sclose);
            const hsize_t start[1] = {index};
            const hsize_t count[1] = {1};
            H5Sselect_hyperslab(fspace, H5S_SELECT_SET, start, nullptr, count,
                                nullptr);
            H5Handle mspace(H5Screate_simple(1, count, nullptr), H5Sclose);
            const int32_t v = static_cast<int32_t>(sample.mixture.size());
            if (H5Dwrite(ds_lengths, H5T_NATIVE_INT32, mspace, fspace,
                         H5P_DEFAULT, &v) < 0)
                throw std::runtime_error("HDF5 write failed (signal_lengths)");
        }
        {
            const std::string text = sample.metadata.to_json();
            const char* ptr = text.c_str();
            H5Handle fspace(H5Dget_space(ds_meta), H5Sclose);
            const hsize_t start[1] = {index};
            const hsize_t count[1] = {1};
            H5Sselect_hyperslab(fspace, H5S_SELECT_SET, start, nullptr, count,
                                nullptr);
            H5Handle mspace(H5Screate_simple(1, count, nullptr), H5Sclose);
            if (H5Dwrite(ds_meta, str_type, mspace, fspace, H5P_DEFAULT, &ptr) < 0)
                throw std::runtime_error("HDF5 write failed (metadata)");
        }
    }

    void write_manifest_row(const MixtureSample& sample) {
        append_frame(sh_mixed,
                     reinterpret_cast<const unsigned char*>(stage_mixed.data()),
                     stage_mixed.size() * sizeof(float));
        append_frame(sh_sources,
                     reinterpret_cast<const unsigned char*>(stage_sources.data()),
                     stage_sources.size() * sizeof(float));
        const int32_t v = static_cast<int32_t>(sample.mixture.size());
        append_frame(sh_lengths, reinterpret_cast<const unsigned char*>(&v),
                     sizeof(v));
        const std::string text = sample.metadata.to_json();
        append_frame(sh_meta,
                     reinterpret_cast<const unsigned char*>(text.data()),
                     text.size());
    }
};

CorpusWriter::CorpusWriter(const std::string& path, Backend backend,
                           const CorpusLayout& layout)
    : impl_(std::make_unique<Impl>()) {
    if (layout.corpus_size == 0 || layout.sample_length == 0)
        throw std::invalid_argument("CorpusWriter: empty layout");
    impl_->backend = backend;
    impl_->layout = layout;
    impl_->path = path;
    impl_->stage_mixed.resize(2 * layout.sample_length);
    impl_->stage_sources.resize(
        2 * layout.sample_length * static_cast<std::size_t>(layout.max_sources));
    if (backend == Backend::hdf5)
        impl_->open_hdf5();
    else
        impl_->open_manifest();
}

CorpusWriter::~CorpusWriter() {
    if (impl_ && !impl_->finalized) {
        try {
            finalize();
        } catch (...) {
        }
    }
}

void CorpusWriter::write(std::size_t index, const MixtureSample& sample) {
    Impl& im = *impl_;
    if (im.finalized) throw std::runtime_error("CorpusWriter: already finalized");
    if (index != im.next_index)
        throw std::runtime_error(
            "CorpusWriter: non-contiguous index " + std::to_string(index) +
            " (expected " + std::to_string(im.next_index) + ")");
    if (index >= im.layout.corpus_size)
        throw std::runtime_error("CorpusWriter: index beyond corpus size");
    if (sample.mixture.size() != im.layout.sample_length)
        throw std::runtime_error("CorpusWriter: sample length mismatch");
    if (sample.targets.size() > static_cast<std::size_t>(im.layout.max_sources))
        throw std::runtime_error("CorpusWriter: too many targets");

    to_f32_pairs(sample.mixture.samples, im.stage_mixed.data());
    std::fill(im.stage_sources.begin(), im.stage_sources.end(), 0.0f);
    for (std::size_t s = 0; s < sample.targets.size(); ++s) {
        if (sample.targets[s].size() != im.layout.sample_length)
            throw std::runtime_error("CorpusWriter: target length mismatch");
        to_f32_pairs(sample.targets[s].samples,
                     im.stage_sources.data() + s * 2 * im.layout.sample_length);
    }

    if (im.backend == Backend::hdf5)
        im.write_hdf5_row(index, sample);
    else
        im.write_manifest_row(sample);
    ++im.next_index;
}

CorpusWriter::Summary CorpusWriter::finalize() {
    Impl& im = *impl_;
    if (im.finalized) throw std::runtime_error("CorpusWriter: already finalized");
    im.finalized = true;

    Summary out;
    out.samples_written = im.next_index;

    if (im.backend == Backend::hdf5) {
        if (im.next_index < im.layout.corpus_size)
            write_string_attr(im.ds_mixed, "completed_samples",
                              std::to_string(im.next_index));
        im.ds_mixed.reset();
        im.ds_sources.reset();
        im.ds_lengths.reset();
        im.ds_meta.reset();
        im.ctype_file.reset();
        im.ctype_mem.reset();
        im.str_type.reset();
        im.file.reset();
    } else {
        auto close_shard = [&](Impl::Shard& s) {
            s.bin.close();
            std::ofstream idx(s.idx_path, std::ios::binary | std::ios::trunc);
            for (const uint64_t off : s.offsets) {
                unsigned char le[8];
                for (int b = 0; b < 8; ++b)
                    le[b] = static_cast<unsigned char>(off >> (8 * b));
                idx.write(reinterpret_cast<const char*>(le), 8);
            }
        };
        close_shard(im.sh_mixed);
        close_shard(im.sh_sources);
        close_shard(im.sh_lengths);
        close_shard(im.sh_meta);

        json manifest;
        manifest["format"] = "rfss-manifest/1";
        manifest["corpus_size"] = im.next_index;
        manifest["declared_size"] = im.layout.corpus_size;
        manifest["sample_length"] = im.layout.sample_length;
        manifest["max_sources"] = im.layout.max_sources;
        manifest["sample_rate_hz"] = kCommonRateHz;
        manifest["dtype"] = "complex64 as little-endian float32 (real, imag) pairs";
        manifest["compression"] = "deflate-" + std::to_string(im.layout.deflate_level);
        auto ds_entry = [&](const char* name, json shape, const char* kind) {
            manifest["datasets"][name] = {
                {"shape", std::move(shape)},
                {"kind", kind},
                {"data", std::string(name) + ".bin"},
                {"index", std::string(name) + ".idx"}};
        };
        const auto n = im.next_index;
        ds_entry(kDsMixed, json::array({n, im.layout.sample_length}), "complex64");
        ds_entry(kDsSources,
                 json::array({n, im.layout.max_sources, im.layout.sample_length}),
                 "complex64");
        ds_entry(kDsLengths, json::array({n}), "int32");
        ds_entry(kDsMetadata, json::array({n}), "json");
        std::ofstream mf(fs::path(im.path) / "manifest.json",
                         std::ios::binary | std::ios::trunc);
        mf << manifest.dump(2) << "\n";
    }

    out.digest_crc32 = corpus_digest(im.path);
    out.bytes = 0;
    if (im.backend == Backend::hdf5) {
        out.bytes = fs::file_size(im.path);
    } else {
        for (const auto& e : fs::directory_iterator(im.path))
            if (e.is_regular_file()) out.bytes += e.file_size();
    }
    return out;
}

uint32_t corpus_digest(const std::string& path) {
    uint32_t crc = ::crc32(0L, nullptr, 0);
    if (fs::is_directory(path)) {
        std::vector<fs::path> files;
        for (const auto& e : fs::directory_iterator(path))
            if (e.is_regular_file()) files.push_back(e.path());
        std::sort(files.begin(), files.end());
        for (const auto& f : files) crc = crc32_file(f, crc);
    } else {
        crc = crc32_file(path, crc);
    }
    return crc;
}

// ---- Reader ------------------------------------------------------------

struct CorpusReader::Impl {
    Backend backend;
    std::string path;
    std::size_t corpus_size = 0;
    std::size_t sample_length = 0;
    int max_sources = 4;
    bool has_metadata = true;

    // hdf5
    H5Handle file;
    H5Handle ds_mixed, ds_sources, ds_lengths, ds_meta;
    H5Handle ctype_mem, str_type;

    // manifest
    json manifest;
    struct ShardR {
        fs::path bin_path;
        std::vector<uint64_t> offsets;
    };
    ShardR rs_mixed, rs_sources, rs_lengths, rs_meta;

    void open_hdf5() {
        file = H5Handle(H5Fopen(path.c_str(), H5F_ACC_RDONLY, H5P_DEFAULT),
                        H5Fclose);
        ctype_mem = H5Handle(make_complex_mem_type(), H5Tclose);
        str_type = H5Handle(make_vlen_string_type(), H5Tclose);
        ds_mixed = H5Handle(H5Dopen2(file, kDsMixed, H5P_DEFAULT), H5Dclose);
        ds_sources = H5Handle(H5Dopen2(file, kDsSources, H5P_DEFAULT), H5Dclose);
        ds_lengths = H5Handle(H5Dopen2(file, kDsLengths, H5P_DEFAULT), H5Dclose);
        has_metadata = H5Lexists(file, kDsMetadata, H5P_DEFAULT) > 0;
        if (has_metadata)
            ds_meta = H5Handle(H5Dopen2(file, kDsMetadata, H5P_DEFAULT), H5Dclose);

        H5Handle space(H5Dget_space(ds_sources), H5Sclose);
        hsize_t dims[3];
        if (H5Sget_simple_extent_ndims(space) != 3)
            throw std::runtime_error("source_signals must be 3-D");
        H5Sget_simple_extent_dims(space, dims, nullptr);
        corpus_size = dims[0];
        max_sources = static_cast<int>(dims[1]);
        sample_length = dims[2];
    }

    void open_manifest() {
        std::ifstream mf(fs::path(path) / "manifest.json");
        if (!mf) throw std::runtime_error("missing manifest.json in " + path);
        mf >> manifest;
        if (manifest.at("format").get<std::string>() != "rfss-manifest/1")
            throw std::runtime_error("unsupported manifest format");
        corpus_size = manifest.at("corpus_size").get<std::size_t>();
        sample_length = manifest.at("sample_length").get<std::size_t>();
        max_sources = manifest.at("max_sources").get<int>();
        auto load_shard = [&](ShardR& s, const char* name, bool required) {
            if (!manifest.at("datasets").contains(name)) {
                if (required)
                    throw std::runtime_error(std::string("missing dataset ") + name);
                return false;
            }
            const auto& e = manifest.at("datasets").at(name);
            s.bin_path = fs::path(path) / e.at("data").get<std::string>();
            const fs::path idx = fs::path(path) / e.at("index").get<std::string>();
            std::ifstream in(idx, std::ios::binary);
            if (!in) throw std::runtime_error("missing index: " + idx.string());
            s.offsets.resize(corpus_size + 1);
            for (auto& off : s.offsets) {
                unsigned char le[8];
                in.read(reinterpret_cast<char*>(le), 8);
                off = 0;
                for (int b = 7; b >= 0; --b) off = (off << 8) | le[b];
            }
            return true;
        };
        load_shard(rs_mixed, kDsMixed, true);
        load_shard(rs_sources, kDsSources, true);
        load_shard(rs_lengths, kDsLengths, true);
        has_metadata = load_shard(rs_meta, kDsMetadata, false);
    }

    std::vector<unsigned char> read_frame(const ShardR& s, std::size_t index,
                                          std::size_t expected) const {
        const uint64_t begin = s.offsets[index];
        const uint64_t end = s.offsets[index + 1];
        std::ifstream in(s.bin_path, std::ios::binary);
        in.seekg(static_cast<std::streamoff>(begin));
        std::vector<unsigned char> comp(end - begin);
        in.read(reinterpret_cast<char*>(comp.data()),
                static_cast<std::streamsize>(comp.size()));
        if (!in) throw std::runtime_error("corrupt shard frame");
        return inflate_frame(comp.data(), comp.size(), expected);
    }

    void check_index(std::size_t index) const {
        if (index >= corpus_size)
            throw std::out_of_range("sample index " + std::to_string(index) +
                                    " out of range (corpus size " +
                                    std::to_string(corpus_size) + ")");
    }
};

CorpusReader::CorpusReader(const std::string& path)
    : impl_(std::make_unique<Impl>()) {
    impl_->path = path;
    if (fs::is_directory(path)) {
        impl_->backend = Backend::manifest;
        impl_->open_manifest();
    } else {
        impl_->backend = Backend::hdf5;
        impl_->open_hdf5();
    }
}

CorpusReader::~CorpusReader() = default;

std::size_t CorpusReader::size() const { return impl_->corpus_size; }
std::size_t CorpusReader::sample_length() const { return impl_->sample_length; }
int CorpusReader::max_sources() const { return impl_->max_sources; }
bool CorpusReader::has_metadata() const { return impl_->has_metadata; }

SampleMetadata CorpusReader::read_metadata(std::size_t index) const {
    impl_->check_index(index);
    if (!impl_->has_metadata)
        throw std::runtime_error("corpus has no metadata dataset");
    if (impl_->backend == Backend::hdf5) {
        H5Handle fspace(H5Dget_space(impl_->ds_meta), H5Sclose);
        const hsize_t start[1] = {index};
        const hsize_t count[1] = {1};
        H5Sselect_hyperslab(fspace, H5S_SELECT_SET, start, nullptr, count,
                            nullptr);
        H5Handle mspace(H5Screate_simple(1, count, nullptr), H5Sclose);
        char* ptr = nullptr;
        if (H5Dread(impl_->ds_meta, impl_->str_type, mspace, fspace, H5P_DEFAULT,
                    &ptr) < 0)
            throw std::runtime_error("HDF5 read failed (metadata)");
        std::string text = ptr ? ptr : "";
        H5free_memory(ptr);
        return SampleMetadata::from_json(text);
    }
    const uint64_t begin = impl_->rs_meta.offsets[index];
    const uint64_t end = impl_->rs_meta.offsets[index + 1];
    std::ifstream in(impl_->rs_meta.bin_path, std::ios::binary);
    in.seekg(static_cast<std::streamoff>(begin));
    std::vector<unsigned char> comp(end - begin);
    in.read(reinterpret_cast<char*>(comp.data()),
            static_cast<std::streamsize>(comp.size()));
    // JSON frame length is not fixed; inflate with a growing buffer.
    std::size_t cap = 4096;
    while (true) {
        std::vector<unsigned char> out(cap);
        uLongf got = static_cast<uLongf>(cap);
        const int rc = uncompress(out.data(), &got, comp.data(),
                                  static_cast<uLong>(comp.size()));
        if (rc == Z_OK)
            return SampleMetadata::from_json(
                std::string(reinterpret_cast<char*>(out.data()), got));
        if (rc != Z_BUF_ERROR || cap > (1u << 26))
            throw std::runtime_error("inflate failed (metadata)");
        cap *= 2;
    }
}

int32_t CorpusReader::read_signal_length(std::size_t index) const {
    impl_->check_index(index);
    if (impl_->backend == Backend::hdf5) {
        H5Handle fspace(H5Dget_space(impl_->ds_lengths), H5Sclose);
        const hsize_t start[1] = {index};
        const hsize_t count[1] = {1};
        H5Sselect_hyperslab(fspace, H5S_SELECT_SET, start, nullptr, count,
                            nullptr);
        H5Handle mspace(H5Screate_simple(1, count, nullptr), H5Sclose);
        int32_t v = 0;
        if (H5Dread(impl_->ds_lengths, H5T_NATIVE_INT32, mspace, fspace,
                    H5P_DEFAULT, &v) < 0)
            throw std::runtime_error("HDF5 read failed (signal_lengths)");
        return v;
    }
    const auto raw = impl_->read_frame(impl_->rs_lengths, index, sizeof(int32_t));
    int32_t v;
    std::memcpy(&v, raw.data(), sizeof(v));
    return v;
}

IqBuffer CorpusReader::read_mixture(std::size_t index) const {
    impl_->check_index(index);
    const std::size_t len = impl_->sample_length;
    std::vector<float> stage(2 * len);
    if (impl_->backend == Backend::hdf5) {
        H5Handle fspace(H5Dget_space(impl_->ds_mixed), H5Sclose);
        const hsize_t start[2] = {index, 0};
        const hsize_t count[2] = {1, len};
        H5Sselect_hyperslab(fspace, H5S_SELECT_SET, start, nullptr, count,
                            nullptr);
        const hsize_t mdims[1] = {len};
        H5Handle mspace(H5Screate_simple(1, mdims, nullptr), H5Sclose);
        if (H5Dread(impl_->ds_mixed, impl_->ctype_mem, mspace, fspace,
                    H5P_DEFAULT, stage.data()) < 0)
            throw std::runtime_error("HDF5 read failed (mixed_signals)");
    } else {
        const auto raw = impl_->read_frame(impl_->rs_mixed, index,
                                           stage.size() * sizeof(float));
        std::memcpy(stage.data(), raw.data(), raw.size());
    }
    return IqBuffer(from_f32_pairs(stage.data(), len), kCommonRateHz);
}

std::vector<IqBuffer> CorpusReader::read_source_slots(std::size_t index,
                                                      int count) const {
    impl_->check_index(index);
    if (count < 0 || count > impl_->max_sources)
        throw std::invalid_argument("read_source_slots: bad slot count");
    const std::size_t len = impl_->sample_length;
    std::vector<float> stage(
        2 * len * static_cast<std::size_t>(impl_->max_sources));
    if (impl_->backend == Backend::hdf5) {
        H5Handle fspace(H5Dget_space(impl_->ds_sources), H5Sclose);
        const hsize_t start[3] = {index, 0, 0};
        const hsize_t cnt[3] = {1, static_cast<hsize_t>(impl_->max_sources), len};
        H5Sselect_hyperslab(fspace, H5S_SELECT_SET, start, nullptr, cnt, nullptr);
        const hsize_t mdims[1] = {cnt[1] * len};
        H5Handle mspace(H5Screate_simple(1, mdims, nullptr), H5Sclose);
        if (H5Dread(impl_->ds_sources, impl_->ctype_mem, mspace, fspace,
                    H5P_DEFAULT, stage.data()) < 0)
            throw std::runtime_error("HDF5 read failed (source_signals)");
    } else {
        const auto raw = impl_->read_frame(impl_->rs_sources, index,
                                           stage.size() * sizeof(float));
        std::memcpy(stage.data(), raw.data(), raw.size());
    }
    std::vector<IqBuffer> out;
    for (int s = 0; s < count; ++s)
        out.emplace_back(
            from_f32_pairs(stage.data() + static_cast<std::size_t>(s) * 2 * len, len),
            kCommonRateHz);
    return out;
}

MixtureSample CorpusReader::read_sample(std::size_t index) const {
    MixtureSample sample;
    sample.metadata = read_metadata(index);
    sample.mixture = read_mixture(index);
    sample.targets = read_source_slots(index, sample.metadata.num_sources);

    ScenarioDraw& s = sample.scenario;
    s.num_sources = sample.metadata.num_sources;
    for (const auto& name : sample.metadata.standards)
        s.standards.push_back(standard_from_string(name));
    s.mode = mixing_mode_from_string(sample.metadata.mixing_mode);
    s.freq_offsets_hz = sample.metadata.freq_offsets_hz;
    s.powers_db = sample.metadata.powers_db;
    s.timing_offsets_samples = sample.metadata.timing_offsets;
    s.snr_db = sample.metadata.snr_db;
    return sample;
}

}  // namespace rfss
