#pragma once

#include <cmath>

#include "tsketch/types.hpp"

namespace tsketch::linalg {

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

inline double nrm2(const std::vector<double>& a) {
    double acc = 0.0;
    for (double x : a) acc += x * x;
    return std::sqrt(acc);
}

inline double col_dot(const Matrix& m, std::uint64_t c1, std::uint64_t c2) {
    double acc = 0.0;
    for (std::uint64_t i = 0; i < m.rows(); ++i) acc += m.at(i, c1) * m.at(i, c2);
    return acc;
}

inline Matrix identity(std::uint64_t n) {
    Matrix m(n, n);
    for (std::uint64_t i = 0; i < n; ++i) m.at(i, i) = 1.0;
    return m;
}

/// C = A^T * B for column blocks (small dims; serial).
inline Matrix gram_cross(const Matrix& a, const Matrix& b) {
    Matrix c(a.cols(), b.cols());
    for (std::uint64_t i = 0; i < a.cols(); ++i)
        for (std::uint64_t j = 0; j < b.cols(); ++j) {
            double acc = 0.0;
            for (std::uint64_t t = 0; t < a.rows(); ++t) acc += a.at(t, i) * b.at(t, j);
            c.at(i, j) = acc;
        }
    return c;
}

/// Modified Gram-Schmidt on the columns, two passes. Columns whose norm
/// collapses are replaced by canonical vectors orthogonalized against the
/// rest, so the result always has orthonormal columns.
void orthonormalize_columns(Matrix& m);

}  // namespace tsketch::linalg
