#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "expint/dense.hpp"
#include "expint/vector_ops.hpp"

namespace expint {

using Index = std::int64_t;

struct Triplet {
  Index row;
  Index col;
  double value;
};

/// Compressed sparse row matrix. Immutable after construction; the
/// constructor validates the structural invariants (monotone row pointers,
/// strictly increasing in-range column indices per row).
class CsrMatrix {
 public:
  CsrMatrix() = default;
  CsrMatrix(std::size_t n_rows, std::size_t n_cols, std::vector<Index> row_ptr,
            std::vector<Index> col_idx, std::vector<double> values);

  /// Duplicates are summed. Entries may come in any order.
  static CsrMatrix from_triplets(std::size_t n_rows, std::size_t n_cols,
                                 std::vector<Triplet> triplets);
  static CsrMatrix identity(std::size_t n);
  static CsrMatrix from_dense(const DenseMatrix& d, double drop_tol = 0.0);

  std::size_t rows() const noexcept { return n_rows_; }
  std::size_t cols() const noexcept { return n_cols_; }
  std::size_t nnz() const noexcept { return values_.size(); }

  std::span<const Index> row_ptr() const noexcept { return row_ptr_; }
  std::span<const Index> col_idx() const noexcept { return col_idx_; }
  std::span<const double> values() const noexcept { return values_; }

  /// Entry (i, j), zero when not stored.
  double at(std::size_t i, std::size_t j) const;

  DenseMatrix to_dense() const;

 private:
  std::size_t n_rows_ = 0;
  std::size_t n_cols_ = 0;
  std::vector<Index> row_ptr_{0};
  std::vector<Index> col_idx_;
  std::vector<double> values_;
};

/// y = A x, accumulated row by row left to right.
Vector spmv(const CsrMatrix& a, std::span<const double> x);
void spmv(const CsrMatrix& a, std::span<const double> x, std::span<double> y);

CsrMatrix transpose(const CsrMatrix& a);
double norm1(const CsrMatrix& a);
double norm_inf(const CsrMatrix& a);

/// alpha*A + beta*B with the union sparsity pattern.
CsrMatrix add(double alpha, const CsrMatrix& a, double beta, const CsrMatrix& b);

/// shift*I + scale*A. Used for the Rosenbrock stage operator I + dt*A.
CsrMatrix shifted(const CsrMatrix& a, double shift, double scale);

/// diag(d) * A
CsrMatrix scale_rows(const CsrMatrix& a, std::span<const double> d);

/// ||A - A^T||_1 / ||A + A^T||_1
double asymmetry_ratio(const CsrMatrix& a);

}  // namespace expint
