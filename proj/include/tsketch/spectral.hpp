#pragma once

#include <vector>

#include "tsketch/kernels.hpp"
#include "tsketch/types.hpp"

namespace tsketch {

/// Thin SVD: m == left * diag(singular_values) * right^T with
/// singular_values descending and both factors column-orthonormal.
struct SvdResult {
    std::vector<double> singular_values;  // size min(rows, cols)
    Matrix left;                          // rows x min
    Matrix right;                         // cols x min
};

/// One-sided Jacobi on the tall orientation: the plane rotations implicitly
/// diagonalize the thin-side Gram system and the sweeps refine small singular
/// values without ever forming it.
SvdResult matrix_svd(const Matrix& m);

/// Column-orthonormal d x r basis (max |U^T U - I| <= 1e-10 entrywise).
class FactorBasis {
public:
    explicit FactorBasis(Matrix columns);

    std::uint64_t dim() const noexcept { return columns_.rows(); }
    std::uint64_t rank() const noexcept { return columns_.cols(); }
    const Matrix& columns() const noexcept { return columns_; }

private:
    Matrix columns_;
};

FactorBasis top_left_singular_vectors(const Matrix& m, std::uint64_t r);

/// ||UU^T - VV^T|| = sqrt(max(0, 1 - sigma_min(U^T V)^2)); in [0, 1].
/// Evaluated through the orthogonal residual ||(I - VV^T) U||, which is the
/// same quantity without the precision loss of 1 - sigma_min^2 near zero.
double subspace_distance(const FactorBasis& u, const FactorBasis& v);

/// sigma_r(m) - sigma_{r+1}(m), with sigma_{r+1} := 0 at full rank.
double eigengap(const Matrix& m, std::uint64_t r);

/// Relative gap below which subspace results are tagged gap-degenerate.
inline constexpr double kDegenerateGapRatio = 1e-12;

struct NormEstimate {
    double value = 0.0;                            // <A, u_1 x ... x u_k> at the factors
    std::vector<std::vector<double>> unit_factors; // one unit vector per mode
    std::uint64_t restarts_used = 0;
    std::uint64_t iterations_used = 0;             // sweeps summed over restarts
    bool converged = false;                        // flag of the best restart
};

/// Fixed restart-seed constant so identical settings give identical restart
/// initializations everywhere (ratios of estimates then share their bias).
inline constexpr std::uint64_t kPowerSeed = 0x7C3B5A19D24E68F1ull;

struct PowerSettings {
    std::uint64_t restarts = 10;
    std::uint64_t max_iters = 200;
    double tol = 1e-9;  // relative objective change per sweep
    std::uint64_t seed = kPowerSeed;
    kernels::Exec exec = kernels::Exec::Parallel;
};

/// Certified lower bound on the tensor spectral norm via multi-start
/// alternating rank-1 maximization. Start 0 uses the top left singular
/// vector of every matricization; the rest are seeded unit Gaussians.
NormEstimate tensor_spectral_norm(const DenseTensor& a, const PowerSettings& settings);
NormEstimate tensor_spectral_norm(const DenseTensor& a, std::uint64_t restarts = 10,
                                  std::uint64_t max_iters = 200, double tol = 1e-9);
NormEstimate tensor_spectral_norm(const SparseTensor& a, const PowerSettings& settings);
NormEstimate tensor_spectral_norm(const SparseTensor& a, std::uint64_t restarts = 10,
                                  std::uint64_t max_iters = 200, double tol = 1e-9);

/// ||A||_F^2 / value^2; upper-bounds the true stable rank since value is a
/// lower bound on ||A||.
double stable_rank(const DenseTensor& a, const NormEstimate& estimate);

namespace detail {

struct AscentResult {
    double value = 0.0;
    std::vector<std::vector<double>> factors;
    std::uint64_t sweeps = 0;
    bool converged = false;
};

/// One restart of the alternating ascent from the given unit factors. If
/// trace is non-null it receives the objective after every sweep (the
/// monotone sequence).
AscentResult rank1_ascent(const DenseTensor& a, std::vector<std::vector<double>> factors,
                          std::uint64_t max_iters, double tol, kernels::Exec exec,
                          std::vector<double>* trace = nullptr);
AscentResult rank1_ascent(const SparseTensor& a, const kernels::SparseModeIndex& idx,
                          std::vector<std::vector<double>> factors, std::uint64_t max_iters,
                          double tol, kernels::Exec exec, std::vector<double>* trace = nullptr);

}  // namespace detail

}  // namespace tsketch
