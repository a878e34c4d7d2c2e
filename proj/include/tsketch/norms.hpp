#pragma once

#include "tsketch/kernels.hpp"
#include "tsketch/types.hpp"

namespace tsketch {

double frobenius_norm(const DenseTensor& a, kernels::Exec exec = kernels::Exec::Parallel);
double frobenius_norm(const SparseTensor& a, kernels::Exec exec = kernels::Exec::Parallel);
double frobenius_norm(const Matrix& m, kernels::Exec exec = kernels::Exec::Parallel);

DenseTensor densify(const SparseTensor& s);

/// Drops exact zeros only; densify(sparsify_exact(a)) == a bit-exactly.
SparseTensor sparsify_exact(const DenseTensor& a);

/// Entrywise a - b (same shape).
DenseTensor subtract(const DenseTensor& a, const DenseTensor& b);

}  // namespace tsketch
