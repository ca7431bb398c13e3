#pragma once

#include <cstddef>
#include <vector>

#include "expint/csr.hpp"
#include "expint/dense.hpp"

namespace expint {

/// Block Krylov basis span(U, AU, ..., A^{k-1}U) with deflation: a new block
/// keeps only the directions whose pivoted Gram-Schmidt norm exceeds
/// 1e-12 * ||A||_1, so block widths may shrink as the iteration proceeds.
struct BlockKrylovBasis {
  std::vector<Vector> v;              // orthonormal columns, pending block last
  std::vector<std::size_t> offsets;   // block b spans [offsets[b], offsets[b+1])
  DenseMatrix h;                      // block upper Hessenberg projection
  std::size_t first_block = 0;        // width of E1
  bool breakdown = false;             // new block fully deflated
  double deflation_tol = 0.0;

  /// Blocks whose image under A has been computed.
  std::size_t blocks() const noexcept { return offsets.size() - 2; }
  /// Number of columns in the completed blocks (k*m without deflation).
  std::size_t dim() const noexcept { return offsets[blocks()]; }
  /// Columns of the pending block (0 after breakdown).
  std::size_t pending_width() const noexcept { return v.size() - dim(); }
  /// H[0:dim, 0:dim]
  DenseMatrix square() const;
  /// Rows of the pending block, columns of the last completed block.
  DenseMatrix subdiagonal() const;
  /// First dim x first_block columns of the identity.
  DenseMatrix e1() const;
};

/// Basis whose first block is the given orthonormal set.
BlockKrylovBasis start_block_krylov(const std::vector<Vector>& first_block,
                                    std::size_t max_blocks, double anorm1);

/// One block Arnoldi step: A times the pending block, two block MGS passes
/// against the basis, pivoted MGS of the remainder with deflation. Returns the
/// number of products with A (the pending block width); 0 if nothing to do.
std::size_t block_arnoldi_extend(const CsrMatrix& a, BlockKrylovBasis& basis);

}  // namespace expint
