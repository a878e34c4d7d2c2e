#pragma once

#include <string>

#include "tsketch/types.hpp"

namespace tsketch::io {

// Binary formats, all little-endian.
//   DTEN: "DTEN", u32 k, k x u64 dims, total x f64 values
//   STEN: "STEN", u32 k, k x u64 dims, u64 nnz, nnz x (u64 index, f64 value)
//         with indices strictly ascending

enum class TensorFormat { Dense, Sparse };

void write_dense(const std::string& path, const DenseTensor& t);
DenseTensor read_dense(const std::string& path);

void write_sparse(const std::string& path, const SparseTensor& t);
SparseTensor read_sparse(const std::string& path);

/// Peeks at the magic. Throws FormatError on anything else.
TensorFormat detect_format(const std::string& path);

/// d x r column matrix stored as a 2-tensor in the DTEN format.
void write_matrix_dense(const std::string& path, const Matrix& m);
Matrix read_matrix_dense(const std::string& path);

}  // namespace tsketch::io
