#include "tsketch/types.hpp"

#include <limits>

namespace tsketch {

Shape::Shape(std::vector<std::uint64_t> dims) : dims_(std::move(dims)) {
    if (dims_.empty()) throw std::invalid_argument("shape: order must be >= 1");
    std::uint64_t total = 1;
    for (std::uint64_t d : dims_) {
        if (d < 1) throw std::invalid_argument("shape: every dim must be >= 1");
        if (d != 0 && total > std::numeric_limits<std::uint64_t>::max() / d)
            throw std::invalid_argument("shape: total overflows the index type");
        total *= d;
    }
    total_ = total;
}

std::uint64_t Shape::dim(std::uint64_t mode_1based) const {
    if (mode_1based < 1 || mode_1based > dims_.size())
        throw std::out_of_range("shape: mode index out of range");
    return dims_[mode_1based - 1];
}

DenseTensor::DenseTensor(Shape shape, std::vector<double> values)
    : shape_(std::move(shape)), values_(std::move(values)) {
    if (values_.size() != shape_.total())
        throw std::invalid_argument("dense tensor: values.length != shape.total");
    if (!all_finite(values_))
        throw std::invalid_argument("dense tensor: values must be finite");
}

DenseTensor DenseTensor::zeros(Shape shape) {
    std::vector<double> v(shape.total(), 0.0);
    return DenseTensor(std::move(shape), std::move(v));
}

SparseTensor::SparseTensor(Shape shape, std::vector<Entry> entries)
    : shape_(std::move(shape)), entries_(std::move(entries)) {
    std::uint64_t prev = 0;
    bool first = true;
    for (const Entry& e : entries_) {
        if (e.index >= shape_.total())
            throw std::invalid_argument("sparse tensor: linear index out of range");
        if (!first && e.index <= prev)
            throw std::invalid_argument("sparse tensor: indices must be strictly increasing");
        if (e.value == 0.0 || !std::isfinite(e.value))
            throw std::invalid_argument("sparse tensor: values must be nonzero and finite");
        prev = e.index;
        first = false;
    }
}

Matrix::Matrix(std::uint64_t rows, std::uint64_t cols)
    : rows_(rows), cols_(cols), values_(rows * cols, 0.0) {
    if (rows < 1 || cols < 1) throw std::invalid_argument("matrix: rows and cols must be >= 1");
}

Matrix::Matrix(std::uint64_t rows, std::uint64_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
    if (rows < 1 || cols < 1) throw std::invalid_argument("matrix: rows and cols must be >= 1");
    if (values_.size() != rows * cols)
        throw std::invalid_argument("matrix: values.length != rows*cols");
    if (!all_finite(values_)) throw std::invalid_argument("matrix: values must be finite");
}

Matrix Matrix::transposed() const {
    Matrix t(cols_, rows_);
    for (std::uint64_t i = 0; i < rows_; ++i)
        for (std::uint64_t j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
    return t;
}

}  // namespace tsketch
