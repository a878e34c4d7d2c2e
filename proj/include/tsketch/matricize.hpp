#pragma once

#include "tsketch/kernels.hpp"
#include "tsketch/types.hpp"

namespace tsketch {

/// Row and 0-based column of a cell under the mode-j unfolding. The column
/// ordering folds the remaining multi indices row-major in ascending mode
/// order: col = sum_{s != j} (i_s - 1) * prod_{s' > s, s' != j} d_{s'}.
struct MatricizedCoord {
    std::uint64_t row;
    std::uint64_t col;
};

MatricizedCoord matricized_coord(const Shape& shape, std::uint64_t mode,
                                 std::uint64_t linear);

/// Mode-j unfolding of a dense tensor into a d_j x (total/d_j) matrix.
Matrix matricize(const DenseTensor& a, std::uint64_t mode,
                 kernels::Exec exec = kernels::Exec::Parallel);

/// Mode-j unfolding of a sparse tensor, rows sorted by column.
kernels::SparseRows matricize_sparse(const SparseTensor& a, std::uint64_t mode);

/// Dense matrix in row-sorted sparse form (exact zeros dropped).
kernels::SparseRows to_sparse_rows(const Matrix& m);

}  // namespace tsketch
