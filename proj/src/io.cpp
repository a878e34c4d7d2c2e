#include "tsketch/io.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <memory>

namespace tsketch::io {

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

class Reader {
public:
    explicit Reader(const std::string& path) : path_(path), f_(std::fopen(path.c_str(), "rb")) {
        if (!f_) throw FormatError("cannot open '" + path + "'", 0);
    }

    std::uint64_t offset() const { return offset_; }

    void bytes(void* dst, std::size_t n) {
        if (std::fread(dst, 1, n, f_.get()) != n)
            throw FormatError("unexpected end of file in '" + path_ + "'", offset_);
        offset_ += n;
    }

    std::uint32_t u32() {
        unsigned char b[4];
        bytes(b, 4);
        std::uint32_t v = 0;
        for (int i = 3; i >= 0; --i) v = (v << 8) | b[i];
        return v;
    }

    std::uint64_t u64() {
        unsigned char b[8];
        bytes(b, 8);
        std::uint64_t v = 0;
        for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
        return v;
    }

    double f64() { return std::bit_cast<double>(u64()); }

    void expect_eof() {
        unsigned char c;
        if (std::fread(&c, 1, 1, f_.get()) == 1)
            throw FormatError("trailing bytes in '" + path_ + "'", offset_);
    }

    const std::string& path() const { return path_; }

private:
    std::string path_;
    FilePtr f_;
    std::uint64_t offset_ = 0;
};

class Writer {
public:
    explicit Writer(const std::string& path) : f_(std::fopen(path.c_str(), "wb")) {
        if (!f_) throw std::runtime_error("cannot open '" + path + "' for writing");
    }

    void bytes(const void* src, std::size_t n) {
        if (std::fwrite(src, 1, n, f_.get()) != n)
            throw std::runtime_error("short write");
    }

    void u32(std::uint32_t v) {
        unsigned char b[4];
        for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
        bytes(b, 4);
    }

    void u64(std::uint64_t v) {
        unsigned char b[8];
        for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
        bytes(b, 8);
    }

    void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }

private:
    FilePtr f_;
};

Shape read_shape(Reader& r, const char magic[4]) {
    char m[4];
    const std::uint64_t magic_at = r.offset();
    r.bytes(m, 4);
    if (std::memcmp(m, magic, 4) != 0)
        throw FormatError(std::string("bad magic in '") + r.path() + "', expected " +
                              std::string(magic, 4),
                          magic_at);
    const std::uint64_t k_at = r.offset();
    const std::uint32_t k = r.u32();
    if (k < 1) throw FormatError("order must be >= 1", k_at);
    std::vector<std::uint64_t> dims(k);
    for (std::uint32_t j = 0; j < k; ++j) {
        const std::uint64_t at = r.offset();
        dims[j] = r.u64();
        if (dims[j] < 1) throw FormatError("dim must be >= 1", at);
    }
    try {
        return Shape(std::move(dims));
    } catch (const std::invalid_argument& e) {
        throw FormatError(e.what(), k_at);
    }
}

void write_shape(Writer& w, const char magic[4], const Shape& shape) {
    w.bytes(magic, 4);
    w.u32(static_cast<std::uint32_t>(shape.order()));
    for (std::uint64_t d : shape.dims()) w.u64(d);
}

}  // namespace

void write_dense(const std::string& path, const DenseTensor& t) {
    Writer w(path);
    write_shape(w, "DTEN", t.shape());
    for (double v : t.values()) w.f64(v);
}

DenseTensor read_dense(const std::string& path) {
    Reader r(path);
    Shape shape = read_shape(r, "DTEN");
    std::vector<double> values(shape.total());
    for (std::uint64_t i = 0; i < shape.total(); ++i) {
        const std::uint64_t at = r.offset();
        values[i] = r.f64();
        if (!std::isfinite(values[i])) throw FormatError("non-finite value", at);
    }
    r.expect_eof();
    return DenseTensor(std::move(shape), std::move(values));
}

void write_sparse(const std::string& path, const SparseTensor& t) {
    Writer w(path);
    write_shape(w, "STEN", t.shape());
    w.u64(t.nnz());
    for (const auto& e : t.entries()) {
        w.u64(e.index);
        w.f64(e.value);
    }
}

SparseTensor read_sparse(const std::string& path) {
    Reader r(path);
    Shape shape = read_shape(r, "STEN");
    const std::uint64_t nnz = r.u64();
    std::vector<SparseTensor::Entry> entries(nnz);
    std::uint64_t prev = 0;
    for (std::uint64_t i = 0; i < nnz; ++i) {
        const std::uint64_t at = r.offset();
        entries[i].index = r.u64();
        entries[i].value = r.f64();
        if (entries[i].index >= shape.total())
            throw FormatError("entry index out of range", at);
        if (i > 0 && entries[i].index <= prev)
            throw FormatError("entry indices must be strictly ascending", at);
        if (entries[i].value == 0.0 || !std::isfinite(entries[i].value))
            throw FormatError("entry value must be nonzero and finite", at + 8);
        prev = entries[i].index;
    }
    r.expect_eof();
    return SparseTensor(std::move(shape), std::move(entries));
}

TensorFormat detect_format(const std::string& path) {
    Reader r(path);
    char m[4];
    r.bytes(m, 4);
    if (std::memcmp(m, "DTEN", 4) == 0) return TensorFormat::Dense;
    if (std::memcmp(m, "STEN", 4) == 0) return TensorFormat::Sparse;
    throw FormatError("unknown magic in '" + path + "'", 0);
}

void write_matrix_dense(const std::string& path, const Matrix& m) {
    write_dense(path, DenseTensor(Shape({m.rows(), m.cols()}), m.values()));
}

Matrix read_matrix_dense(const std::string& path) {
    DenseTensor t = read_dense(path);
    if (t.shape().order() != 2)
        throw FormatError("expected a 2-tensor in '" + path + "'", 4);
    return Matrix(t.shape().dims()[0], t.shape().dims()[1], t.values());
}

}  // namespace tsketch::io
