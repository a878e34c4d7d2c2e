#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "tsketch/types.hpp"

namespace tsketch::kernels {

/// Execution policy for the data-parallel kernels. Results are bit-identical
/// across policies and across OpenMP thread counts: reductions use a fixed
/// block decomposition and every output element is accumulated serially in a
/// fixed order.
enum class Exec { Serial, Parallel };

inline constexpr std::uint64_t kSumBlock = 4096;

/// Fixed-block sum of f(i) for i in [0, count). The per-block partials are
/// accumulated left to right and combined in block order, so the result does
/// not depend on the thread count.
template <typename F>
double blocked_sum(std::uint64_t count, F&& f, Exec exec) {
    if (count == 0) return 0.0;
    const std::uint64_t nblocks = (count + kSumBlock - 1) / kSumBlock;
    std::vector<double> partial(nblocks, 0.0);
#pragma omp parallel for schedule(static) if (exec == Exec::Parallel)
    for (std::int64_t b = 0; b < static_cast<std::int64_t>(nblocks); ++b) {
        const std::uint64_t lo = static_cast<std::uint64_t>(b) * kSumBlock;
        const std::uint64_t hi = std::min(count, lo + kSumBlock);
        double acc = 0.0;
        for (std::uint64_t i = lo; i < hi; ++i) acc += f(i);
        partial[static_cast<std::uint64_t>(b)] = acc;
    }
    double total = 0.0;
    for (double p : partial) total += p;
    return total;
}

double sum_squares(const std::vector<double>& v, Exec exec);

/// Plain left-to-right reference sum (not bit-identical to blocked_sum).
double sum_squares_ref(const std::vector<double>& v);

// ---------------------------------------------------------------------------
// Dense mode contraction: out[i] = sum over cells with mode index i of
// A(cell) * prod_{s != mode} factors[s][i_s].  `mode` is 1-based.
// ---------------------------------------------------------------------------

void mode_contract_dense(const Shape& shape, const std::vector<double>& values,
                         std::uint64_t mode, const std::vector<std::vector<double>>& factors,
                         std::vector<double>& out, Exec exec);

/// Reference: one serial pass over all cells, decoding the multi index per
/// cell. Agrees with mode_contract_dense up to summation-order rounding.
void mode_contract_dense_ref(const Shape& shape, const std::vector<double>& values,
                             std::uint64_t mode, const std::vector<std::vector<double>>& factors,
                             std::vector<double>& out);

// ---------------------------------------------------------------------------
// Sparse mode contraction over a prebuilt per-mode index.
// ---------------------------------------------------------------------------

/// Per-entry multi indices (0-based) plus, per mode, the entry ids grouped by
/// that mode's index. Entry ids within a group ascend, which fixes the
/// accumulation order.
struct SparseModeIndex {
    std::vector<std::vector<std::uint32_t>> coords;   // [mode][entry] -> i_mode - 1
    std::vector<std::vector<std::vector<std::uint32_t>>> buckets;  // [mode][i][..] -> entry id
};

SparseModeIndex build_sparse_mode_index(const SparseTensor& t);

void mode_contract_sparse(const SparseTensor& t, const SparseModeIndex& idx, std::uint64_t mode,
                          const std::vector<std::vector<double>>& factors,
                          std::vector<double>& out, Exec exec);

void mode_contract_sparse_ref(const SparseTensor& t, const SparseModeIndex& idx,
                              std::uint64_t mode,
                              const std::vector<std::vector<double>>& factors,
                              std::vector<double>& out);

// ---------------------------------------------------------------------------
// Sparse rows (one matricized sketch) and the merge-dot product A * B^T.
// ---------------------------------------------------------------------------

struct SparseRows {
    std::uint64_t rows = 0;
    std::uint64_t cols = 0;
    // per row: (col, value) sorted ascending by col
    std::vector<std::vector<std::pair<std::uint64_t, double>>> row;
};

/// out(i, j) = <row i of a, row j of b> via index-sorted merge on columns.
Matrix spmm_abt(const SparseRows& a, const SparseRows& b, Exec exec);

Matrix spmm_abt_ref(const SparseRows& a, const SparseRows& b);

}  // namespace tsketch::kernels
