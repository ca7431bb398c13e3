#include "expint/arnoldi.hpp"

#include <cmath>

#include "expint/expm.hpp"

namespace expint {

DenseMatrix KrylovBasis::square() const { return h.block(0, 0, k, k); }

double KrylovBasis::last_subdiagonal() const {
  if (breakdown || k == 0) return 0.0;
  return h(k, k - 1);
}

KrylovBasis start_krylov(std::span<const double> start, std::size_t capacity, double anorm1) {
  detail::require(capacity >= 1, "start_krylov: capacity must be positive");
  KrylovBasis b;
  b.h = DenseMatrix(capacity + 1, capacity);
  b.beta = norm2(start);
  b.breakdown_tol = 1e-14 * anorm1;
  if (b.beta == 0.0) {
    b.breakdown = true;
    return b;
  }
  b.v.reserve(capacity + 1);
  b.v.push_back(scaled(1.0 / b.beta, start));
  return b;
}

bool arnoldi_extend(const CsrMatrix& a, KrylovBasis& basis) {
  if (basis.breakdown || basis.full()) return false;
  detail::require(a.rows() == a.cols(), "arnoldi_extend: matrix must be square");
  const std::size_t j = basis.k;
  Vector w = spmv(a, basis.v[j]);
  for (int pass = 0; pass < 2; ++pass) {
    for (std::size_t i = 0; i <= j; ++i) {
      const double c = dot(w, basis.v[i]);
      basis.h(i, j) += c;
      axpy(-c, basis.v[i], w);
    }
  }
  const double s = norm2(w);
  basis.k = j + 1;
  if (s <= basis.breakdown_tol) {
    basis.h(j + 1, j) = 0.0;
    basis.breakdown = true;
    return true;
  }
  basis.h(j + 1, j) = s;
  basis.v.push_back(scaled(1.0 / s, w));
  return true;
}

Vector galerkin_solution(const KrylovBasis& basis, std::span<const double> u0, double t) {
  const std::size_t k = basis.k;
  detail::require(k >= 1, "galerkin_solution: empty basis");
  detail::require(u0.size() == k, "galerkin_solution: u0 length must equal k");
  const DenseMatrix hk = basis.square();
  Vector rhs = hk * u0;
  for (double& x : rhs) x = -x;
  rhs[0] += basis.beta;
  Vector u = phi_action_dense(hk, rhs, t);
  axpy(1.0, u0, u);
  return u;
}

Vector krylov_reconstruct(const KrylovBasis& basis, std::span<const double> v,
                          std::span<const double> u) {
  detail::require(u.size() <= basis.v.size(), "krylov_reconstruct: too many coefficients");
  Vector y(v.begin(), v.end());
  for (std::size_t i = 0; i < u.size(); ++i) axpy(u[i], basis.v[i], y);
  return y;
}

double exp_residual_norm(const KrylovBasis& basis, std::span<const double> u) {
  detail::require(u.size() == basis.k, "exp_residual_norm: coefficient length must equal k");
  if (basis.k == 0) return 0.0;
  return basis.last_subdiagonal() * std::abs(u[basis.k - 1]);
}

}  // namespace expint
