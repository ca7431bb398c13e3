#include "expint/csr.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace expint {

CsrMatrix::CsrMatrix(std::size_t n_rows, std::size_t n_cols, std::vector<Index> row_ptr,
                     std::vector<Index> col_idx, std::vector<double> values)
    : n_rows_(n_rows),
      n_cols_(n_cols),
      row_ptr_(std::move(row_ptr)),
      col_idx_(std::move(col_idx)),
      values_(std::move(values)) {
  detail::require(row_ptr_.size() == n_rows_ + 1, "CsrMatrix: row_ptr length must be rows+1");
  detail::require(row_ptr_.front() == 0, "CsrMatrix: row_ptr[0] must be 0");
  detail::require(col_idx_.size() == values_.size(), "CsrMatrix: col_idx/values length mismatch");
  detail::require(static_cast<std::size_t>(row_ptr_.back()) == values_.size(),
                  "CsrMatrix: row_ptr[rows] must equal nnz");
  for (std::size_t i = 0; i < n_rows_; ++i) {
    detail::require(row_ptr_[i] <= row_ptr_[i + 1], "CsrMatrix: row_ptr must be nondecreasing");
    for (Index p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) {
      detail::require(col_idx_[p] >= 0 && static_cast<std::size_t>(col_idx_[p]) < n_cols_,
                      "CsrMatrix: column index out of range");
      if (p > row_ptr_[i])
        detail::require(col_idx_[p - 1] < col_idx_[p],
                        "CsrMatrix: column indices must be strictly increasing within a row");
    }
  }
}

CsrMatrix CsrMatrix::from_triplets(std::size_t n_rows, std::size_t n_cols,
                                   std::vector<Triplet> triplets) {
  for (const auto& t : triplets) {
    detail::require(t.row >= 0 && static_cast<std::size_t>(t.row) < n_rows,
                    "from_triplets: row index out of range");
    detail::require(t.col >= 0 && static_cast<std::size_t>(t.col) < n_cols,
                    "from_triplets: column index out of range");
  }
  std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  std::vector<Index> row_ptr(n_rows + 1, 0);
  std::vector<Index> cols;
  std::vector<double> vals;
  cols.reserve(triplets.size());
  vals.reserve(triplets.size());
  for (std::size_t k = 0; k < triplets.size(); ++k) {
    const auto& t = triplets[k];
    if (!cols.empty() && k > 0 && triplets[k - 1].row == t.row && triplets[k - 1].col == t.col) {
      vals.back() += t.value;
      continue;
    }
    cols.push_back(t.col);
    vals.push_back(t.value);
    ++row_ptr[t.row + 1];
  }
  for (std::size_t i = 0; i < n_rows; ++i) row_ptr[i + 1] += row_ptr[i];
  return CsrMatrix(n_rows, n_cols, std::move(row_ptr), std::move(cols), std::move(vals));
}

CsrMatrix CsrMatrix::identity(std::size_t n) {
  std::vector<Index> rp(n + 1), ci(n);
  for (std::size_t i = 0; i <= n; ++i) rp[i] = static_cast<Index>(i);
  for (std::size_t i = 0; i < n; ++i) ci[i] = static_cast<Index>(i);
  return CsrMatrix(n, n, std::move(rp), std::move(ci), std::vector<double>(n, 1.0));
}

CsrMatrix CsrMatrix::from_dense(const DenseMatrix& d, double drop_tol) {
  std::vector<Triplet> t;
  for (std::size_t i = 0; i < d.rows(); ++i)
    for (std::size_t j = 0; j < d.cols(); ++j)
      if (std::abs(d(i, j)) > drop_tol)
        t.push_back({static_cast<Index>(i), static_cast<Index>(j), d(i, j)});
  return from_triplets(d.rows(), d.cols(), std::move(t));
}

double CsrMatrix::at(std::size_t i, std::size_t j) const {
  const auto begin = col_idx_.begin() + row_ptr_[i];
  const auto end = col_idx_.begin() + row_ptr_[i + 1];
  const auto it = std::lower_bound(begin, end, static_cast<Index>(j));
  if (it == end || *it != static_cast<Index>(j)) return 0.0;
  return values_[it - col_idx_.begin()];
}

DenseMatrix CsrMatrix::to_dense() const {
  DenseMatrix d(n_rows_, n_cols_);
  for (std::size_t i = 0; i < n_rows_; ++i)
    for (Index p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) d(i, col_idx_[p]) = values_[p];
  return d;
}

void spmv(const CsrMatrix& a, std::span<const double> x, std::span<double> y) {
  detail::require(a.cols() == x.size(), "spmv: A.n_cols != len(x)");
  detail::require(a.rows() == y.size(), "spmv: A.n_rows != len(y)");
  const auto rp = a.row_ptr();
  const auto ci = a.col_idx();
  const auto v = a.values();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    for (Index p = rp[i]; p < rp[i + 1]; ++p) s += v[p] * x[ci[p]];
    y[i] = s;
  }
}

Vector spmv(const CsrMatrix& a, std::span<const double> x) {
  Vector y(a.rows());
  spmv(a, x, y);
  return y;
}

CsrMatrix transpose(const CsrMatrix& a) {
  std::vector<Index> rp(a.cols() + 1, 0);
  for (Index c : a.col_idx()) ++rp[c + 1];
  for (std::size_t j = 0; j < a.cols(); ++j) rp[j + 1] += rp[j];
  std::vector<Index> ci(a.nnz());
  std::vector<double> vals(a.nnz());
  std::vector<Index> next(rp.begin(), rp.end() - 1);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (Index p = a.row_ptr()[i]; p < a.row_ptr()[i + 1]; ++p) {
      const Index dst = next[a.col_idx()[p]]++;
      ci[dst] = static_cast<Index>(i);
      vals[dst] = a.values()[p];
    }
  }
  return CsrMatrix(a.cols(), a.rows(), std::move(rp), std::move(ci), std::move(vals));
}

double norm1(const CsrMatrix& a) {
  std::vector<double> colsum(a.cols(), 0.0);
  for (std::size_t p = 0; p < a.nnz(); ++p) colsum[a.col_idx()[p]] += std::abs(a.values()[p]);
  return colsum.empty() ? 0.0 : *std::max_element(colsum.begin(), colsum.end());
}

double norm_inf(const CsrMatrix& a) {
  double best = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    for (Index p = a.row_ptr()[i]; p < a.row_ptr()[i + 1]; ++p) s += std::abs(a.values()[p]);
    best = std::max(best, s);
  }
  return best;
}

CsrMatrix add(double alpha, const CsrMatrix& a, double beta, const CsrMatrix& b) {
  detail::require(a.rows() == b.rows() && a.cols() == b.cols(), "add: shape mismatch");
  std::vector<Index> rp(a.rows() + 1, 0);
  std::vector<Index> ci;
  std::vector<double> vals;
  ci.reserve(a.nnz() + b.nnz());
  vals.reserve(a.nnz() + b.nnz());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    Index pa = a.row_ptr()[i], ea = a.row_ptr()[i + 1];
    Index pb = b.row_ptr()[i], eb = b.row_ptr()[i + 1];
    while (pa < ea || pb < eb) {
      const Index ca = pa < ea ? a.col_idx()[pa] : static_cast<Index>(a.cols());
      const Index cb = pb < eb ? b.col_idx()[pb] : static_cast<Index>(b.cols());
      if (ca == cb) {
        ci.push_back(ca);
        vals.push_back(alpha * a.values()[pa++] + beta * b.values()[pb++]);
      } else if (ca < cb) {
        ci.push_back(ca);
        vals.push_back(alpha * a.values()[pa++]);
      } else {
        ci.push_back(cb);
        vals.push_back(beta * b.values()[pb++]);
      }
    }
    rp[i + 1] = static_cast<Index>(ci.size());
  }
  return CsrMatrix(a.rows(), a.cols(), std::move(rp), std::move(ci), std::move(vals));
}

CsrMatrix shifted(const CsrMatrix& a, double shift, double scale) {
  detail::require(a.rows() == a.cols(), "shifted: matrix must be square");
  return add(scale, a, shift, CsrMatrix::identity(a.rows()));
}

CsrMatrix scale_rows(const CsrMatrix& a, std::span<const double> d) {
  detail::require(d.size() == a.rows(), "scale_rows: length mismatch");
  std::vector<double> vals(a.values().begin(), a.values().end());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (Index p = a.row_ptr()[i]; p < a.row_ptr()[i + 1]; ++p) vals[p] *= d[i];
  return CsrMatrix(a.rows(), a.cols(), {a.row_ptr().begin(), a.row_ptr().end()},
                   {a.col_idx().begin(), a.col_idx().end()}, std::move(vals));
}

double asymmetry_ratio(const CsrMatrix& a) {
  const CsrMatrix at = transpose(a);
  const double sym = norm1(add(1.0, a, 1.0, at));
  detail::require(sym > 0.0, "asymmetry_ratio: A + A^T vanishes");
  return norm1(add(1.0, a, -1.0, at)) / sym;
}

}  // namespace expint
