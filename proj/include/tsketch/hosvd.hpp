#pragma once

#include <optional>

#include "tsketch/sketch.hpp"
#include "tsketch/spectral.hpp"

namespace tsketch {

enum class HosvdMethod { Exact, Direct, Product };

struct HosvdDiagnostics {
    // Exact/Direct: eigengap of the exact matricization, g_r(M_j).
    // Product: eigengap of the exact product, g_r(M_j M_j^T) = s_r^2 - s_{r+1}^2.
    double gap = 0.0;
    bool gap_degenerate = false;
    std::optional<SketchReport> sketch1;
    std::optional<SketchReport> sketch2;  // Product only
};

struct HosvdResult {
    std::uint64_t mode = 0;
    std::uint64_t rank = 0;
    FactorBasis basis;
    HosvdMethod method = HosvdMethod::Exact;
    HosvdDiagnostics diagnostics;
};

/// Top-r left singular vectors of the mode-j matricization of A.
HosvdResult hosvd_exact(const DenseTensor& a, std::uint64_t mode, std::uint64_t rank);

/// Sparsify once, then SVD the matricized sketch.
HosvdResult hosvd_direct(const DenseTensor& a, std::uint64_t budget, std::uint64_t mode,
                         std::uint64_t rank, std::uint64_t seed);

/// Two independent sketches (child seeds mix64(seed ^ kChildSketch1/2)); the
/// basis is the top-r left singular vectors of M_j(S1) M_j(S2)^T. The product
/// matrix is not symmetric at finite budgets, so it is never eigendecomposed.
HosvdResult hosvd_product(const DenseTensor& a, std::uint64_t budget, std::uint64_t mode,
                          std::uint64_t rank, std::uint64_t seed);

/// Estimator cores without the exact-input diagnostics; hosvd_direct/product
/// and the sweep harness share these.
FactorBasis direct_basis_from_sketch(const SparseTensor& sketch, std::uint64_t mode,
                                     std::uint64_t rank);
FactorBasis product_basis_from_sketches(const SparseTensor& s1, const SparseTensor& s2,
                                        std::uint64_t mode, std::uint64_t rank,
                                        kernels::Exec exec = kernels::Exec::Parallel);

}  // namespace tsketch
