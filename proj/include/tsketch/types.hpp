#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace tsketch {

/// Malformed binary input; carries the byte offset where parsing failed.
class FormatError : public std::runtime_error {
public:
    FormatError(const std::string& msg, std::uint64_t offset)
        : std::runtime_error(msg + " (byte offset " + std::to_string(offset) + ")"),
          offset_(offset) {}
    std::uint64_t byte_offset() const noexcept { return offset_; }

private:
    std::uint64_t offset_;
};

/// Numerical failure: zero norm where positive is required, degenerate
/// eigengap where a nondegenerate one is required, non-converged solver.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Extents d_1..d_k of a k-way tensor, k >= 1, every dim >= 1.
class Shape {
public:
    Shape() = default;
    explicit Shape(std::vector<std::uint64_t> dims);

    const std::vector<std::uint64_t>& dims() const noexcept { return dims_; }
    std::uint64_t order() const noexcept { return dims_.size(); }
    std::uint64_t dim(std::uint64_t mode_1based) const;  // 1-based mode index
    std::uint64_t total() const noexcept { return total_; }

    bool operator==(const Shape& other) const { return dims_ == other.dims_; }

private:
    std::vector<std::uint64_t> dims_;
    std::uint64_t total_ = 0;
};

/// k-way array, row-major (last index fastest). Immutable once built.
class DenseTensor {
public:
    DenseTensor() = default;
    DenseTensor(Shape shape, std::vector<double> values);

    static DenseTensor zeros(Shape shape);

    const Shape& shape() const noexcept { return shape_; }
    const std::vector<double>& values() const noexcept { return values_; }
    double operator[](std::uint64_t linear) const { return values_[linear]; }

private:
    Shape shape_;
    std::vector<double> values_;
};

/// COO tensor: (linear index, value) pairs, strictly increasing by index,
/// values nonzero and finite. Immutable once built.
class SparseTensor {
public:
    struct Entry {
        std::uint64_t index;
        double value;
        bool operator==(const Entry&) const = default;
    };

    SparseTensor() = default;
    SparseTensor(Shape shape, std::vector<Entry> entries);

    const Shape& shape() const noexcept { return shape_; }
    const std::vector<Entry>& entries() const noexcept { return entries_; }
    std::uint64_t nnz() const noexcept { return entries_.size(); }

private:
    Shape shape_;
    std::vector<Entry> entries_;
};

/// Row-major dense matrix.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::uint64_t rows, std::uint64_t cols);  // zero-filled
    Matrix(std::uint64_t rows, std::uint64_t cols, std::vector<double> values);

    std::uint64_t rows() const noexcept { return rows_; }
    std::uint64_t cols() const noexcept { return cols_; }
    double& at(std::uint64_t i, std::uint64_t j) { return values_[i * cols_ + j]; }
    double at(std::uint64_t i, std::uint64_t j) const { return values_[i * cols_ + j]; }
    const std::vector<double>& values() const noexcept { return values_; }
    std::vector<double>& values() noexcept { return values_; }

    Matrix transposed() const;

private:
    std::uint64_t rows_ = 0;
    std::uint64_t cols_ = 0;
    std::vector<double> values_;
};

inline bool all_finite(const std::vector<double>& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

}  // namespace tsketch
