#include "tsketch/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tsketch/linalg.hpp"
#include "tsketch/matricize.hpp"
#include "tsketch/norms.hpp"
#include "tsketch/rng.hpp"

namespace tsketch {

namespace linalg {

void orthonormalize_columns(Matrix& m) {
    const std::uint64_t rows = m.rows(), cols = m.cols();
    if (cols > rows)
        throw std::invalid_argument("orthonormalize: more columns than rows");
    for (std::uint64_t c = 0; c < cols; ++c) {
        for (int pass = 0; pass < 2; ++pass) {
            for (std::uint64_t p = 0; p < c; ++p) {
                const double proj = col_dot(m, p, c);
                for (std::uint64_t i = 0; i < rows; ++i) m.at(i, c) -= proj * m.at(i, p);
            }
        }
        const double norm = std::sqrt(col_dot(m, c, c));
        if (norm > 1e-8) {
            for (std::uint64_t i = 0; i < rows; ++i) m.at(i, c) /= norm;
            continue;
        }
        // collapsed column: take the canonical vector with the largest
        // residual against the columns built so far
        double best_res = -1.0;
        std::vector<double> best(rows), cand(rows);
        for (std::uint64_t t = 0; t < rows; ++t) {
            std::fill(cand.begin(), cand.end(), 0.0);
            cand[t] = 1.0;
            for (std::uint64_t p = 0; p < c; ++p) {
                double proj = 0.0;
                for (std::uint64_t i = 0; i < rows; ++i) proj += cand[i] * m.at(i, p);
                for (std::uint64_t i = 0; i < rows; ++i) cand[i] -= proj * m.at(i, p);
            }
            const double res = nrm2(cand);
            if (res > best_res) {
                best_res = res;
                best = cand;
            }
        }
        for (std::uint64_t i = 0; i < rows; ++i) m.at(i, c) = best[i] / best_res;
        // one more pass to tighten orthogonality of the replacement
        for (std::uint64_t p = 0; p < c; ++p) {
            const double proj = col_dot(m, p, c);
            for (std::uint64_t i = 0; i < rows; ++i) m.at(i, c) -= proj * m.at(i, p);
        }
        const double n2 = std::sqrt(col_dot(m, c, c));
        for (std::uint64_t i = 0; i < rows; ++i) m.at(i, c) /= n2;
    }
}

}  // namespace linalg

namespace {

void rotate_columns(Matrix& m, std::uint64_t i, std::uint64_t j, double c, double s) {
    for (std::uint64_t t = 0; t < m.rows(); ++t) {
        const double xi = m.at(t, i), xj = m.at(t, j);
        m.at(t, i) = c * xi - s * xj;
        m.at(t, j) = s * xi + c * xj;
    }
}

}  // namespace

SvdResult matrix_svd(const Matrix& m) {
    const bool transposed = m.rows() < m.cols();
    Matrix x = transposed ? m.transposed() : m;
    const std::uint64_t rows = x.rows(), cols = x.cols();
    Matrix v = linalg::identity(cols);

    constexpr int kMaxSweeps = 100;
    bool converged = false;
    for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
        // columns this far below the largest are rotation debris; excluding
        // them keeps the scale-invariant off metric from stalling on
        // numerically rank-deficient inputs
        double max_norm2 = 0.0;
        for (std::uint64_t c = 0; c < cols; ++c)
            max_norm2 = std::max(max_norm2, linalg::col_dot(x, c, c));
        const double tiny2 = max_norm2 * 1e-28;
        double max_off = 0.0;
        for (std::uint64_t i = 0; i < cols; ++i) {
            for (std::uint64_t j = i + 1; j < cols; ++j) {
                const double alpha = linalg::col_dot(x, i, i);
                const double beta = linalg::col_dot(x, j, j);
                const double gamma = linalg::col_dot(x, i, j);
                if (gamma == 0.0) continue;
                if (alpha <= tiny2 || beta <= tiny2) continue;
                const double denom = std::sqrt(alpha * beta);
                if (denom == 0.0) continue;
                const double off = std::fabs(gamma) / denom;
                max_off = std::max(max_off, off);
                if (off <= 1e-15) continue;
                const double zeta = (beta - alpha) / (2.0 * gamma);
                const double t =
                    (zeta >= 0.0 ? 1.0 : -1.0) / (std::fabs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                rotate_columns(x, i, j, c, s);
                rotate_columns(v, i, j, c, s);
            }
        }
        if (max_off <= 1e-14) converged = true;
    }
    if (!converged) throw NumericalError("matrix_svd: Jacobi sweeps did not converge");

    std::vector<double> sigma(cols);
    for (std::uint64_t c = 0; c < cols; ++c) sigma[c] = std::sqrt(linalg::col_dot(x, c, c));
    std::vector<std::uint64_t> order(cols);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::uint64_t a, std::uint64_t b) { return sigma[a] > sigma[b]; });

    std::vector<double> sigma_sorted(cols);
    Matrix u(rows, cols);
    Matrix v_sorted(cols, cols);
    for (std::uint64_t c = 0; c < cols; ++c) {
        const std::uint64_t src = order[c];
        sigma_sorted[c] = sigma[src];
        for (std::uint64_t i = 0; i < cols; ++i) v_sorted.at(i, c) = v.at(i, src);
        if (sigma[src] > 0.0)
            for (std::uint64_t i = 0; i < rows; ++i) u.at(i, c) = x.at(i, src) / sigma[src];
        // zero columns are left at 0 and filled in by the polish below
    }
    linalg::orthonormalize_columns(u);

    SvdResult result;
    result.singular_values = std::move(sigma_sorted);
    if (transposed) {
        result.left = std::move(v_sorted);
        result.right = std::move(u);
    } else {
        result.left = std::move(u);
        result.right = std::move(v_sorted);
    }
    return result;
}

FactorBasis::FactorBasis(Matrix columns) : columns_(std::move(columns)) {
    const std::uint64_t d = columns_.rows(), r = columns_.cols();
    if (r < 1 || r > d) throw std::invalid_argument("factor basis: rank must be in [1, dim]");
    for (std::uint64_t i = 0; i < r; ++i) {
        for (std::uint64_t j = i; j < r; ++j) {
            const double g = linalg::col_dot(columns_, i, j);
            const double want = i == j ? 1.0 : 0.0;
            if (std::fabs(g - want) > 1e-10)
                throw std::invalid_argument("factor basis: columns not orthonormal");
        }
    }
}

FactorBasis top_left_singular_vectors(const Matrix& m, std::uint64_t r) {
    if (r < 1 || r > m.rows())
        throw std::out_of_range("top_left_singular_vectors: rank out of range");
    const SvdResult svd = matrix_svd(m);
    const std::uint64_t have = svd.singular_values.size();
    Matrix u(m.rows(), r);
    for (std::uint64_t c = 0; c < std::min<std::uint64_t>(r, have); ++c)
        for (std::uint64_t i = 0; i < m.rows(); ++i) u.at(i, c) = svd.left.at(i, c);
    if (r > have) linalg::orthonormalize_columns(u);  // complete past the thin rank
    return FactorBasis(std::move(u));
}

namespace {

// ||(I - VV^T) U||: the largest principal-angle sine. Equal to
// sqrt(1 - sigma_min(U^T V)^2) for equal ranks, but computed from the
// residual so distances near zero keep full precision.
double residual_norm(const FactorBasis& u, const FactorBasis& v) {
    const Matrix cross = linalg::gram_cross(v.columns(), u.columns());  // V^T U
    Matrix residual = u.columns();
    for (std::uint64_t i = 0; i < residual.rows(); ++i)
        for (std::uint64_t c = 0; c < residual.cols(); ++c) {
            double acc = 0.0;
            for (std::uint64_t t = 0; t < v.rank(); ++t)
                acc += v.columns().at(i, t) * cross.at(t, c);
            residual.at(i, c) -= acc;
        }
    return matrix_svd(residual).singular_values[0];
}

}  // namespace

double subspace_distance(const FactorBasis& u, const FactorBasis& v) {
    if (u.dim() != v.dim() || u.rank() != v.rank())
        throw std::invalid_argument("subspace_distance: dimension or rank mismatch");
    const double d = std::max(residual_norm(u, v), residual_norm(v, u));
    return std::min(1.0, d);
}

double eigengap(const Matrix& m, std::uint64_t r) {
    const std::uint64_t mn = std::min(m.rows(), m.cols());
    if (r < 1 || r > mn) throw std::out_of_range("eigengap: rank out of range");
    const SvdResult svd = matrix_svd(m);
    const double s_r = svd.singular_values[r - 1];
    const double s_r1 = r == mn ? 0.0 : svd.singular_values[r];
    return s_r - s_r1;
}

namespace {

struct DenseOps {
    const DenseTensor& a;
    kernels::Exec exec;

    const Shape& shape() const { return a.shape(); }

    void contract(std::uint64_t mode, const std::vector<std::vector<double>>& f,
                  std::vector<double>& out) const {
        kernels::mode_contract_dense(a.shape(), a.values(), mode, f, out, exec);
    }

    std::vector<double> top_init(std::uint64_t mode) const {
        const Matrix m = matricize(a, mode, exec);
        const SvdResult svd = matrix_svd(m);
        std::vector<double> u(m.rows());
        for (std::uint64_t i = 0; i < m.rows(); ++i) u[i] = svd.left.at(i, 0);
        return u;
    }
};

struct SparseOps {
    const SparseTensor& a;
    const kernels::SparseModeIndex& idx;
    kernels::Exec exec;

    const Shape& shape() const { return a.shape(); }

    void contract(std::uint64_t mode, const std::vector<std::vector<double>>& f,
                  std::vector<double>& out) const {
        kernels::mode_contract_sparse(a, idx, mode, f, out, exec);
    }

    std::vector<double> top_init(std::uint64_t mode) const {
        const kernels::SparseRows s = matricize_sparse(a, mode);
        const Matrix g = kernels::spmm_abt(s, s, exec);
        const SvdResult svd = matrix_svd(g);
        std::vector<double> u(g.rows());
        for (std::uint64_t i = 0; i < g.rows(); ++i) u[i] = svd.left.at(i, 0);
        return u;
    }
};

template <typename Ops>
detail::AscentResult ascent_impl(const Ops& ops, std::vector<std::vector<double>> factors,
                                 std::uint64_t max_iters, double tol,
                                 std::vector<double>* trace) {
    const std::uint64_t k = ops.shape().order();
    detail::AscentResult r;
    r.factors = std::move(factors);
    std::vector<double> v;
    double lambda_prev = -1.0;
    for (std::uint64_t sweep = 1; sweep <= max_iters; ++sweep) {
        double lambda = 0.0;
        for (std::uint64_t j = 1; j <= k; ++j) {
            ops.contract(j, r.factors, v);
            const double nv = linalg::nrm2(v);
            if (nv > 0.0) {
                for (std::uint64_t i = 0; i < v.size(); ++i) r.factors[j - 1][i] = v[i] / nv;
                lambda = nv;
            } else {
                lambda = 0.0;  // factor stays; objective is 0 at this mode
            }
        }
        r.sweeps = sweep;
        if (trace) trace->push_back(lambda);
        if (lambda_prev >= 0.0 &&
            std::fabs(lambda - lambda_prev) <= tol * std::max(lambda, 1e-300)) {
            r.converged = true;
            break;
        }
        lambda_prev = lambda;
    }
    ops.contract(k, r.factors, v);
    r.value = linalg::dot(v, r.factors[k - 1]);
    return r;
}

std::vector<std::vector<double>> canonical_factors(const Shape& shape) {
    std::vector<std::vector<double>> f;
    for (std::uint64_t d : shape.dims()) {
        std::vector<double> u(d, 0.0);
        u[0] = 1.0;
        f.push_back(std::move(u));
    }
    return f;
}

std::vector<std::vector<double>> random_factors(const Shape& shape, std::uint64_t seed,
                                                std::uint64_t restart) {
    std::vector<std::vector<double>> f;
    const auto& dims = shape.dims();
    for (std::uint64_t j = 0; j < dims.size(); ++j) {
        const std::uint64_t stream = rng::derive_seed(seed, restart * 64 + j + 1);
        std::vector<double> u(dims[j]);
        for (std::uint64_t t = 0; t < dims[j]; ++t) u[t] = rng::gaussian(stream, t);
        const double n = linalg::nrm2(u);
        if (n > 0.0)
            for (double& x : u) x /= n;
        else
            u[0] = 1.0;
        f.push_back(std::move(u));
    }
    return f;
}

template <typename Ops>
NormEstimate spectral_norm_impl(const Ops& ops, bool input_is_zero,
                                const PowerSettings& settings) {
    if (settings.restarts < 1 || settings.max_iters < 1 || !(settings.tol > 0.0))
        throw std::invalid_argument("tensor_spectral_norm: bad settings");
    NormEstimate est;
    if (input_is_zero) {
        est.unit_factors = canonical_factors(ops.shape());
        est.converged = true;
        return est;
    }
    detail::AscentResult best;
    for (std::uint64_t restart = 0; restart < settings.restarts; ++restart) {
        std::vector<std::vector<double>> init;
        if (restart == 0) {
            const std::uint64_t k = ops.shape().order();
            for (std::uint64_t j = 1; j <= k; ++j) init.push_back(ops.top_init(j));
        } else {
            init = random_factors(ops.shape(), settings.seed, restart);
        }
        detail::AscentResult r =
            ascent_impl(ops, std::move(init), settings.max_iters, settings.tol, nullptr);
        est.iterations_used += r.sweeps;
        ++est.restarts_used;
        if (restart == 0 || r.value > best.value) best = std::move(r);
    }
    est.value = best.value;
    est.unit_factors = std::move(best.factors);
    est.converged = best.converged;
    return est;
}

}  // namespace

NormEstimate tensor_spectral_norm(const DenseTensor& a, const PowerSettings& settings) {
    DenseOps ops{a, settings.exec};
    const bool zero = frobenius_norm(a, settings.exec) == 0.0;
    return spectral_norm_impl(ops, zero, settings);
}

NormEstimate tensor_spectral_norm(const DenseTensor& a, std::uint64_t restarts,
                                  std::uint64_t max_iters, double tol) {
    PowerSettings s;
    s.restarts = restarts;
    s.max_iters = max_iters;
    s.tol = tol;
    return tensor_spectral_norm(a, s);
}

NormEstimate tensor_spectral_norm(const SparseTensor& a, const PowerSettings& settings) {
    const kernels::SparseModeIndex idx = kernels::build_sparse_mode_index(a);
    SparseOps ops{a, idx, settings.exec};
    return spectral_norm_impl(ops, a.nnz() == 0, settings);
}

NormEstimate tensor_spectral_norm(const SparseTensor& a, std::uint64_t restarts,
                                  std::uint64_t max_iters, double tol) {
    PowerSettings s;
    s.restarts = restarts;
    s.max_iters = max_iters;
    s.tol = tol;
    return tensor_spectral_norm(a, s);
}

double stable_rank(const DenseTensor& a, const NormEstimate& estimate) {
    if (!(estimate.value > 0.0))
        throw NumericalError("stable_rank: spectral norm estimate must be positive");
    const double f = frobenius_norm(a);
    return (f * f) / (estimate.value * estimate.value);
}

namespace detail {

AscentResult rank1_ascent(const DenseTensor& a, std::vector<std::vector<double>> factors,
                          std::uint64_t max_iters, double tol, kernels::Exec exec,
                          std::vector<double>* trace) {
    DenseOps ops{a, exec};
    return ascent_impl(ops, std::move(factors), max_iters, tol, trace);
}

AscentResult rank1_ascent(const SparseTensor& a, const kernels::SparseModeIndex& idx,
                          std::vector<std::vector<double>> factors, std::uint64_t max_iters,
                          double tol, kernels::Exec exec, std::vector<double>* trace) {
    SparseOps ops{a, idx, exec};
    return ascent_impl(ops, std::move(factors), max_iters, tol, trace);
}

}  // namespace detail

}  // namespace tsketch
