#pragma once

#include <span>

#include "tsketch/types.hpp"

namespace tsketch {

/// Row-major strides: stride[j] = prod of dims after mode j+1 (0-based j).
inline std::vector<std::uint64_t> strides(const Shape& shape) {
    const auto& d = shape.dims();
    std::vector<std::uint64_t> s(d.size(), 1);
    for (std::size_t j = d.size(); j-- > 1;) s[j - 1] = s[j] * d[j];
    return s;
}

/// 1-based multi index -> 0-based linear index (row-major, last index fastest).
inline std::uint64_t linear_index(const Shape& shape, std::span<const std::uint64_t> multi) {
    const auto& d = shape.dims();
    if (multi.size() != d.size())
        throw std::out_of_range("linear_index: arity mismatch");
    std::uint64_t lin = 0;
    for (std::size_t j = 0; j < d.size(); ++j) {
        if (multi[j] < 1 || multi[j] > d[j])
            throw std::out_of_range("linear_index: component out of range");
        lin = lin * d[j] + (multi[j] - 1);
    }
    return lin;
}

inline std::uint64_t linear_index(const Shape& shape,
                                  std::initializer_list<std::uint64_t> multi) {
    return linear_index(shape, std::span<const std::uint64_t>(multi.begin(), multi.size()));
}

/// 0-based linear index -> 1-based multi index.
inline std::vector<std::uint64_t> multi_index(const Shape& shape, std::uint64_t linear) {
    const auto& d = shape.dims();
    if (linear >= shape.total()) throw std::out_of_range("multi_index: linear index out of range");
    std::vector<std::uint64_t> multi(d.size());
    for (std::size_t j = d.size(); j-- > 0;) {
        multi[j] = linear % d[j] + 1;
        linear /= d[j];
    }
    return multi;
}

}  // namespace tsketch
