#include "tsketch/matricize.hpp"

#include <algorithm>

#include "tsketch/indexing.hpp"

namespace tsketch {

MatricizedCoord matricized_coord(const Shape& shape, std::uint64_t mode,
                                 std::uint64_t linear) {
    const auto& dims = shape.dims();
    const std::uint64_t k = dims.size();
    if (mode < 1 || mode > k) throw std::out_of_range("matricize: mode out of range");
    const std::uint64_t m = mode - 1;
    std::uint64_t row = 0;
    std::uint64_t col = 0;
    // decode row-major and fold the modes other than `mode` in ascending order
    std::vector<std::uint64_t> ix(k);
    for (std::uint64_t s = k; s-- > 0;) {
        ix[s] = linear % dims[s];
        linear /= dims[s];
    }
    row = ix[m];
    for (std::uint64_t s = 0; s < k; ++s) {
        if (s == m) continue;
        col = col * dims[s] + ix[s];
    }
    return {row, col};
}

Matrix matricize(const DenseTensor& a, std::uint64_t mode, kernels::Exec exec) {
    const Shape& shape = a.shape();
    const std::uint64_t k = shape.order();
    if (mode < 1 || mode > k) throw std::out_of_range("matricize: mode out of range");
    const std::uint64_t m = mode - 1;
    const auto& dims = shape.dims();
    const std::uint64_t d = dims[m];
    const std::uint64_t cols = shape.total() / d;
    std::uint64_t inner = 1;  // product of dims after `mode`
    for (std::uint64_t s = m + 1; s < k; ++s) inner *= dims[s];
    const std::uint64_t outer = shape.total() / (d * inner);
    std::vector<double> out(shape.total());
    const std::vector<double>& v = a.values();
    // cell (o, i, in) at linear (o*d + i)*inner + in lands at (i, o*inner + in)
#pragma omp parallel for schedule(static) if (exec == kernels::Exec::Parallel)
    for (std::int64_t oo = 0; oo < static_cast<std::int64_t>(outer); ++oo) {
        const std::uint64_t o = static_cast<std::uint64_t>(oo);
        for (std::uint64_t i = 0; i < d; ++i) {
            const double* src = v.data() + (o * d + i) * inner;
            double* dst = out.data() + i * cols + o * inner;
            std::copy(src, src + inner, dst);
        }
    }
    return Matrix(d, cols, std::move(out));
}

kernels::SparseRows matricize_sparse(const SparseTensor& a, std::uint64_t mode) {
    const Shape& shape = a.shape();
    if (mode < 1 || mode > shape.order())
        throw std::out_of_range("matricize: mode out of range");
    kernels::SparseRows rows;
    rows.rows = shape.dims()[mode - 1];
    rows.cols = shape.total() / rows.rows;
    rows.row.resize(rows.rows);
    for (const auto& e : a.entries()) {
        const MatricizedCoord c = matricized_coord(shape, mode, e.index);
        rows.row[c.row].emplace_back(c.col, e.value);
    }
    for (auto& r : rows.row)
        std::sort(r.begin(), r.end(),
                  [](const auto& x, const auto& y) { return x.first < y.first; });
    return rows;
}

kernels::SparseRows to_sparse_rows(const Matrix& m) {
    kernels::SparseRows rows;
    rows.rows = m.rows();
    rows.cols = m.cols();
    rows.row.resize(m.rows());
    for (std::uint64_t i = 0; i < m.rows(); ++i)
        for (std::uint64_t j = 0; j < m.cols(); ++j)
            if (m.at(i, j) != 0.0) rows.row[i].emplace_back(j, m.at(i, j));
    return rows;
}

}  // namespace tsketch
