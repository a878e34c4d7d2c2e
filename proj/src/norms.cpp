#include "tsketch/norms.hpp"

#include <cmath>

namespace tsketch {

double frobenius_norm(const DenseTensor& a, kernels::Exec exec) {
    return std::sqrt(kernels::sum_squares(a.values(), exec));
}

double frobenius_norm(const SparseTensor& a, kernels::Exec exec) {
    const auto& e = a.entries();
    return std::sqrt(kernels::blocked_sum(
        e.size(), [&](std::uint64_t i) { return e[i].value * e[i].value; }, exec));
}

double frobenius_norm(const Matrix& m, kernels::Exec exec) {
    return std::sqrt(kernels::sum_squares(m.values(), exec));
}

DenseTensor densify(const SparseTensor& s) {
    std::vector<double> v(s.shape().total(), 0.0);
    for (const auto& e : s.entries()) v[e.index] = e.value;
    return DenseTensor(s.shape(), std::move(v));
}

SparseTensor sparsify_exact(const DenseTensor& a) {
    std::vector<SparseTensor::Entry> entries;
    const auto& v = a.values();
    for (std::uint64_t i = 0; i < v.size(); ++i)
        if (v[i] != 0.0) entries.push_back({i, v[i]});
    return SparseTensor(a.shape(), std::move(entries));
}

DenseTensor subtract(const DenseTensor& a, const DenseTensor& b) {
    if (!(a.shape() == b.shape())) throw std::invalid_argument("subtract: shape mismatch");
    std::vector<double> v(a.values().size());
    for (std::uint64_t i = 0; i < v.size(); ++i) v[i] = a.values()[i] - b.values()[i];
    return DenseTensor(a.shape(), std::move(v));
}

}  // namespace tsketch
