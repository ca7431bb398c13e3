#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "expint/csr.hpp"
#include "expint/dense.hpp"

namespace expint {

/// Orthonormal Krylov basis V and upper Hessenberg projection H built by
/// the Arnoldi process from a starting vector b, with V[0] = b / beta.
struct KrylovBasis {
  std::vector<Vector> v;
  DenseMatrix h;               // (capacity + 1) x capacity
  std::size_t k = 0;           // completed Arnoldi steps
  double beta = 0.0;
  bool breakdown = false;      // K_k(A, b) is A-invariant
  double breakdown_tol = 0.0;  // absolute subdiagonal threshold

  std::size_t capacity() const noexcept { return h.cols(); }
  bool full() const noexcept { return k >= capacity(); }
  /// Leading k x k block of H.
  DenseMatrix square() const;
  /// H(k, k-1); zero after a happy breakdown.
  double last_subdiagonal() const;
};

/// Basis holding only the normalized start vector. anorm1 scales the happy
/// breakdown threshold 1e-14 * ||A||_1. A zero start vector yields an
/// immediately broken-down (empty) basis.
KrylovBasis start_krylov(std::span<const double> start, std::size_t capacity, double anorm1);

/// One modified Gram-Schmidt Arnoldi step with a second orthogonalization
/// pass. Returns false when nothing was done (capacity reached or basis
/// already broken down). Exactly one product with A per successful call.
bool arnoldi_extend(const CsrMatrix& a, KrylovBasis& basis);

/// Exact solution at time t of the projected problem u' = -H_k u + beta e1,
/// u(0) = u0: u(t) = u0 + t phi(-t H_k)(beta e1 - H_k u0).
Vector galerkin_solution(const KrylovBasis& basis, std::span<const double> u0, double t);

/// y = v + V_k u
Vector krylov_reconstruct(const KrylovBasis& basis, std::span<const double> v,
                          std::span<const double> u);

/// ||r_k|| = H(k, k-1) * |u_k| for the Galerkin solution u of the basis.
double exp_residual_norm(const KrylovBasis& basis, std::span<const double> u);

}  // namespace expint
