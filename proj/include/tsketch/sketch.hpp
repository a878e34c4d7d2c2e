#pragma once

#include <utility>

#include "tsketch/kernels.hpp"
#include "tsketch/types.hpp"

namespace tsketch {

/// Magnitude class of an entry relative to ||A||_F / sqrt(n) and
/// ||A||_F / sqrt(d_1...d_k).
enum class Regime { Large, Moderate, Small };

struct RegimeCounts {
    std::uint64_t candidates = 0;  // nonzero entries in the regime
    std::uint64_t retained = 0;
};

/// Provenance of one sketch: per-regime accounting, the analytic expected
/// nnz, and the draw's actual nnz.
struct SketchReport {
    std::uint64_t budget_n = 0;
    std::uint64_t seed = 0;
    RegimeCounts large, moderate, small;
    double expected_nnz = 0.0;
    std::uint64_t actual_nnz = 0;
    double fro_norm_input = 0.0;
};

/// Large if |a| >= fro/sqrt(n); Small if |a| <= fro/sqrt(total); Moderate on
/// the open band in between. Boundary points belong to Large/Small.
Regime classify_entry(double abs_a, double fro, std::uint64_t n, std::uint64_t total);

/// Retention probability: Large -> 1, Moderate -> n*a^2/fro^2,
/// Small -> min(1, n/total).
double keep_probability(double a, double fro, std::uint64_t n, std::uint64_t total);

/// Entry-by-entry sparsification: keep large entries, sample moderate ones
/// proportionally to their squared value, sample small ones uniformly.
/// Retained entries store a/P; deterministic in (a, n, seed) regardless of
/// thread count.
std::pair<SparseTensor, SketchReport> sparsify(const DenseTensor& a, std::uint64_t n,
                                               std::uint64_t seed,
                                               kernels::Exec exec = kernels::Exec::Parallel);

/// Prior-scheme baseline: identical to sparsify except Small entries are
/// dropped with probability 1 (biased; kept for empirical comparison).
std::pair<SparseTensor, SketchReport> sparsify_baseline_zero_small(
    const DenseTensor& a, std::uint64_t n, std::uint64_t seed,
    kernels::Exec exec = kernels::Exec::Parallel);

/// Analytic sum of keep probabilities over nonzero entries; always <= 2n.
double expected_nnz(const DenseTensor& a, std::uint64_t n,
                    kernels::Exec exec = kernels::Exec::Parallel);

}  // namespace tsketch
