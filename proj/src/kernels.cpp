#include "tsketch/kernels.hpp"

#include <limits>

#include "tsketch/indexing.hpp"

namespace tsketch::kernels {

double sum_squares(const std::vector<double>& v, Exec exec) {
    return blocked_sum(v.size(), [&](std::uint64_t i) { return v[i] * v[i]; }, exec);
}

double sum_squares_ref(const std::vector<double>& v) {
    double acc = 0.0;
    for (double x : v) acc += x * x;
    return acc;
}

namespace {

// prod_{s in [lo, hi)} factors[s][i_s] laid out row-major over those modes,
// built by successive expansion so later modes vary fastest.
std::vector<double> expand_weights(const Shape& shape,
                                   const std::vector<std::vector<double>>& factors,
                                   std::uint64_t lo, std::uint64_t hi) {
    std::vector<double> w{1.0};
    for (std::uint64_t s = lo; s < hi; ++s) {
        const std::uint64_t d = shape.dims()[s];
        std::vector<double> next(w.size() * d);
        for (std::uint64_t a = 0; a < w.size(); ++a)
            for (std::uint64_t t = 0; t < d; ++t) next[a * d + t] = w[a] * factors[s][t];
        w = std::move(next);
    }
    return w;
}

}  // namespace

void mode_contract_dense(const Shape& shape, const std::vector<double>& values,
                         std::uint64_t mode, const std::vector<std::vector<double>>& factors,
                         std::vector<double>& out, Exec exec) {
    const std::uint64_t k = shape.order();
    const std::uint64_t m = mode - 1;
    const std::uint64_t d = shape.dims()[m];
    const std::vector<double> w_out = expand_weights(shape, factors, 0, m);
    const std::vector<double> w_in = expand_weights(shape, factors, m + 1, k);
    const std::uint64_t outer = w_out.size();
    const std::uint64_t inner = w_in.size();
    out.assign(d, 0.0);
#pragma omp parallel for schedule(static) if (exec == Exec::Parallel)
    for (std::int64_t ii = 0; ii < static_cast<std::int64_t>(d); ++ii) {
        const std::uint64_t i = static_cast<std::uint64_t>(ii);
        double acc = 0.0;
        for (std::uint64_t o = 0; o < outer; ++o) {
            const double* cell = values.data() + (o * d + i) * inner;
            double row = 0.0;
            for (std::uint64_t in = 0; in < inner; ++in) row += cell[in] * w_in[in];
            acc += w_out[o] * row;
        }
        out[i] = acc;
    }
}

void mode_contract_dense_ref(const Shape& shape, const std::vector<double>& values,
                             std::uint64_t mode, const std::vector<std::vector<double>>& factors,
                             std::vector<double>& out) {
    const std::uint64_t k = shape.order();
    const std::uint64_t m = mode - 1;
    out.assign(shape.dims()[m], 0.0);
    std::vector<std::uint64_t> multi(k, 1);
    for (std::uint64_t lin = 0; lin < shape.total(); ++lin) {
        double term = values[lin];
        for (std::uint64_t s = 0; s < k; ++s)
            if (s != m) term *= factors[s][multi[s] - 1];
        out[multi[m] - 1] += term;
        for (std::uint64_t s = k; s-- > 0;) {  // row-major increment
            if (multi[s] < shape.dims()[s]) {
                ++multi[s];
                break;
            }
            multi[s] = 1;
        }
    }
}

SparseModeIndex build_sparse_mode_index(const SparseTensor& t) {
    const std::uint64_t k = t.shape().order();
    for (std::uint64_t d : t.shape().dims())
        if (d > std::numeric_limits<std::uint32_t>::max())
            throw std::invalid_argument("sparse mode index: dim exceeds 32-bit range");
    SparseModeIndex idx;
    idx.coords.assign(k, std::vector<std::uint32_t>(t.nnz()));
    idx.buckets.resize(k);
    for (std::uint64_t m = 0; m < k; ++m) idx.buckets[m].resize(t.shape().dims()[m]);
    const auto& dims = t.shape().dims();
    for (std::uint64_t e = 0; e < t.nnz(); ++e) {
        std::uint64_t lin = t.entries()[e].index;
        for (std::uint64_t m = k; m-- > 0;) {
            const std::uint32_t c = static_cast<std::uint32_t>(lin % dims[m]);
            idx.coords[m][e] = c;
            idx.buckets[m][c].push_back(static_cast<std::uint32_t>(e));
            lin /= dims[m];
        }
    }
    return idx;
}

void mode_contract_sparse(const SparseTensor& t, const SparseModeIndex& idx, std::uint64_t mode,
                          const std::vector<std::vector<double>>& factors,
                          std::vector<double>& out, Exec exec) {
    const std::uint64_t k = t.shape().order();
    const std::uint64_t m = mode - 1;
    const std::uint64_t d = t.shape().dims()[m];
    out.assign(d, 0.0);
    const auto& entries = t.entries();
#pragma omp parallel for schedule(static) if (exec == Exec::Parallel)
    for (std::int64_t ii = 0; ii < static_cast<std::int64_t>(d); ++ii) {
        const std::uint64_t i = static_cast<std::uint64_t>(ii);
        double acc = 0.0;
        for (std::uint32_t e : idx.buckets[m][i]) {
            double term = entries[e].value;
            for (std::uint64_t s = 0; s < k; ++s)
                if (s != m) term *= factors[s][idx.coords[s][e]];
            acc += term;
        }
        out[i] = acc;
    }
}

void mode_contract_sparse_ref(const SparseTensor& t, const SparseModeIndex& idx,
                              std::uint64_t mode,
                              const std::vector<std::vector<double>>& factors,
                              std::vector<double>& out) {
    const std::uint64_t k = t.shape().order();
    const std::uint64_t m = mode - 1;
    out.assign(t.shape().dims()[m], 0.0);
    for (std::uint64_t e = 0; e < t.nnz(); ++e) {
        double term = t.entries()[e].value;
        for (std::uint64_t s = 0; s < k; ++s)
            if (s != m) term *= factors[s][idx.coords[s][e]];
        out[idx.coords[m][e]] += term;
    }
}

Matrix spmm_abt(const SparseRows& a, const SparseRows& b, Exec exec) {
    if (a.cols != b.cols) throw std::invalid_argument("spmm_abt: column count mismatch");
    Matrix out(a.rows, b.rows);
#pragma omp parallel for schedule(static) if (exec == Exec::Parallel)
    for (std::int64_t ii = 0; ii < static_cast<std::int64_t>(a.rows); ++ii) {
        const std::uint64_t i = static_cast<std::uint64_t>(ii);
        const auto& ra = a.row[i];
        for (std::uint64_t j = 0; j < b.rows; ++j) {
            const auto& rb = b.row[j];
            double acc = 0.0;
            std::size_t p = 0, q = 0;
            while (p < ra.size() && q < rb.size()) {
                if (ra[p].first < rb[q].first)
                    ++p;
                else if (ra[p].first > rb[q].first)
                    ++q;
                else {
                    acc += ra[p].second * rb[q].second;
                    ++p;
                    ++q;
                }
            }
            out.at(i, j) = acc;
        }
    }
    return out;
}

Matrix spmm_abt_ref(const SparseRows& a, const SparseRows& b) {
    if (a.cols != b.cols) throw std::invalid_argument("spmm_abt: column count mismatch");
    Matrix out(a.rows, b.rows);
    std::vector<double> dense(a.cols, 0.0);
    for (std::uint64_t i = 0; i < a.rows; ++i) {
        for (const auto& [c, v] : a.row[i]) dense[c] = v;
        for (std::uint64_t j = 0; j < b.rows; ++j) {
            double acc = 0.0;
            for (const auto& [c, v] : b.row[j]) acc += dense[c] * v;
            out.at(i, j) = acc;
        }
        for (const auto& [c, v] : a.row[i]) dense[c] = 0.0;
    }
    return out;
}

}  // namespace tsketch::kernels
