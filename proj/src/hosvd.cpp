#include "tsketch/hosvd.hpp"

#include "tsketch/linalg.hpp"
#include "tsketch/matricize.hpp"
#include "tsketch/rng.hpp"

namespace tsketch {

namespace {

FactorBasis basis_from_svd(const SvdResult& svd, std::uint64_t rows, std::uint64_t rank) {
    Matrix u(rows, rank);
    const std::uint64_t have = svd.singular_values.size();
    for (std::uint64_t c = 0; c < std::min(rank, have); ++c)
        for (std::uint64_t i = 0; i < rows; ++i) u.at(i, c) = svd.left.at(i, c);
    if (rank > have) linalg::orthonormalize_columns(u);
    return FactorBasis(std::move(u));
}

// gap of the exact matricization at rank r, with sigma_{r+1} := 0 past the
// thin rank; degenerate when the gap vanishes relative to sigma_1
void exact_gap(const SvdResult& svd, std::uint64_t rank, bool squared, HosvdDiagnostics& d) {
    const std::uint64_t have = svd.singular_values.size();
    auto level = [&](std::uint64_t i) {  // 0-based, 0 past the thin rank
        const double s = i < have ? svd.singular_values[i] : 0.0;
        return squared ? s * s : s;
    };
    d.gap = level(rank - 1) - level(rank);
    const double top = level(0);
    d.gap_degenerate = !(d.gap > kDegenerateGapRatio * top) || top == 0.0;
}

Matrix densify_matricized(const SparseTensor& sketch, std::uint64_t mode) {
    const Shape& shape = sketch.shape();
    const std::uint64_t rows = shape.dim(mode);
    const std::uint64_t cols = shape.total() / rows;
    Matrix m(rows, cols);
    for (const auto& e : sketch.entries()) {
        const MatricizedCoord c = matricized_coord(shape, mode, e.index);
        m.at(c.row, c.col) = e.value;
    }
    return m;
}

}  // namespace

FactorBasis direct_basis_from_sketch(const SparseTensor& sketch, std::uint64_t mode,
                                     std::uint64_t rank) {
    return top_left_singular_vectors(densify_matricized(sketch, mode), rank);
}

FactorBasis product_basis_from_sketches(const SparseTensor& s1, const SparseTensor& s2,
                                        std::uint64_t mode, std::uint64_t rank,
                                        kernels::Exec exec) {
    const kernels::SparseRows m1 = matricize_sparse(s1, mode);
    const kernels::SparseRows m2 = matricize_sparse(s2, mode);
    const Matrix product = kernels::spmm_abt(m1, m2, exec);
    return top_left_singular_vectors(product, rank);
}

HosvdResult hosvd_exact(const DenseTensor& a, std::uint64_t mode, std::uint64_t rank) {
    const Matrix m = matricize(a, mode);
    if (rank < 1 || rank > m.rows()) throw std::out_of_range("hosvd: rank out of range");
    const SvdResult svd = matrix_svd(m);
    HosvdResult r{mode, rank, basis_from_svd(svd, m.rows(), rank), HosvdMethod::Exact, {}};
    exact_gap(svd, rank, /*squared=*/false, r.diagnostics);
    return r;
}

HosvdResult hosvd_direct(const DenseTensor& a, std::uint64_t budget, std::uint64_t mode,
                         std::uint64_t rank, std::uint64_t seed) {
    auto [sketch, report] = sparsify(a, budget, seed);
    HosvdResult r{mode, rank, direct_basis_from_sketch(sketch, mode, rank),
                  HosvdMethod::Direct, {}};
    const SvdResult exact = matrix_svd(matricize(a, mode));
    exact_gap(exact, rank, /*squared=*/false, r.diagnostics);
    r.diagnostics.sketch1 = std::move(report);
    return r;
}

HosvdResult hosvd_product(const DenseTensor& a, std::uint64_t budget, std::uint64_t mode,
                          std::uint64_t rank, std::uint64_t seed) {
    const std::uint64_t seed1 = rng::derive_seed(seed, rng::kChildSketch1);
    const std::uint64_t seed2 = rng::derive_seed(seed, rng::kChildSketch2);
    auto [sketch1, report1] = sparsify(a, budget, seed1);
    auto [sketch2, report2] = sparsify(a, budget, seed2);
    HosvdResult r{mode, rank, product_basis_from_sketches(sketch1, sketch2, mode, rank),
                  HosvdMethod::Product, {}};
    const SvdResult exact = matrix_svd(matricize(a, mode));
    exact_gap(exact, rank, /*squared=*/true, r.diagnostics);
    r.diagnostics.sketch1 = std::move(report1);
    r.diagnostics.sketch2 = std::move(report2);
    return r;
}

}  // namespace tsketch
