#include "expint/block_arnoldi.hpp"

#include <algorithm>

namespace expint {

DenseMatrix BlockKrylovBasis::square() const { return h.block(0, 0, dim(), dim()); }

DenseMatrix BlockKrylovBasis::subdiagonal() const {
  const std::size_t k = blocks();
  detail::require(k >= 1, "subdiagonal: no completed block");
  const std::size_t c0 = offsets[k - 1];
  return h.block(dim(), c0, pending_width(), dim() - c0);
}

DenseMatrix BlockKrylovBasis::e1() const {
  DenseMatrix e(dim(), first_block);
  for (std::size_t j = 0; j < first_block && j < dim(); ++j) e(j, j) = 1.0;
  return e;
}

BlockKrylovBasis start_block_krylov(const std::vector<Vector>& first_block,
                                    std::size_t max_blocks, double anorm1) {
  detail::require(!first_block.empty(), "start_block_krylov: empty first block");
  detail::require(max_blocks >= 1, "start_block_krylov: max_blocks must be positive");
  const std::size_t m = first_block.size();
  BlockKrylovBasis b;
  b.v = first_block;
  b.offsets = {0, m};
  b.first_block = m;
  b.h = DenseMatrix((max_blocks + 1) * m, max_blocks * m);
  b.deflation_tol = 1e-12 * anorm1;
  return b;
}

std::size_t block_arnoldi_extend(const CsrMatrix& a, BlockKrylovBasis& basis) {
  if (basis.breakdown) return 0;
  const std::size_t s = basis.dim();
  const std::size_t e = basis.v.size();
  const std::size_t width = e - s;
  if (width == 0 || e > basis.h.cols() || e + width > basis.h.rows() ||
      e + width > a.rows() + width)
    return 0;

  std::vector<Vector> w;
  w.reserve(width);
  for (std::size_t c = s; c < e; ++c) w.push_back(spmv(a, basis.v[c]));

  for (int pass = 0; pass < 2; ++pass) {
    for (std::size_t c = 0; c < width; ++c) {
      for (std::size_t i = 0; i < e; ++i) {
        const double coef = dot(w[c], basis.v[i]);
        basis.h(i, s + c) += coef;
        axpy(-coef, basis.v[i], w[c]);
      }
    }
  }

  // Pivoted MGS on the remainder; columns left below the threshold are deflated.
  std::vector<bool> used(width, false);
  std::size_t added = 0;
  while (added < width) {
    std::size_t pick = width;
    double best = -1.0;
    for (std::size_t c = 0; c < width; ++c) {
      if (used[c]) continue;
      const double nc = norm2(w[c]);
      if (nc > best) {
        best = nc;
        pick = c;
      }
    }
    if (pick == width || best <= basis.deflation_tol) break;
    used[pick] = true;
    Vector q = scaled(1.0 / best, w[pick]);
    for (std::size_t i = 0; i < basis.v.size(); ++i) axpy(-dot(q, basis.v[i]), basis.v[i], q);
    const double qn = norm2(q);
    scale(1.0 / qn, q);
    const std::size_t row = e + added;
    basis.h(row, s + pick) = best;
    for (std::size_t c = 0; c < width; ++c) {
      if (used[c]) continue;
      const double coef = dot(q, w[c]);
      basis.h(row, s + c) = coef;
      axpy(-coef, q, w[c]);
    }
    basis.v.push_back(std::move(q));
    ++added;
  }
  basis.offsets.push_back(e + added);
  if (added == 0) basis.breakdown = true;
  return width;
}

}  // namespace expint
