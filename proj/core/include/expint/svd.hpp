#pragma once

#include "expint/dense.hpp"

namespace expint {

struct SvdResult {
  DenseMatrix left;               // orthonormal columns
  Vector singular_values;         // nonincreasing, nonnegative
  DenseMatrix right;              // cols x cols, orthogonal
};

/// Thin SVD S = left * diag(sigma) * right^T of a tall matrix (rows >= cols).
/// Householder QR reduces S to a small triangular factor, which is then
/// diagonalized by one-sided Jacobi rotations. Left singular vectors belonging
/// to zero singular values are completed to an orthonormal set.
SvdResult thin_svd(const DenseMatrix& s);
/// Same, but only the leading left_columns left vectors are formed.
SvdResult thin_svd(const DenseMatrix& s, std::size_t left_columns);

/// Householder QR of a tall matrix. Returns the thin Q (rows x cols) and
/// the upper triangular R (cols x cols).
struct QrResult {
  DenseMatrix q;
  DenseMatrix r;
};
QrResult householder_qr(const DenseMatrix& a);

}  // namespace expint
