#include "expint/gmres.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace expint {

Ilu0::Ilu0(const CsrMatrix& a) : factors_(a), diag_pos_(a.rows(), -1) {
  detail::require(a.rows() == a.cols(), "Ilu0: matrix must be square");
  const auto rp = a.row_ptr();
  const auto ci = a.col_idx();
  std::vector<double> vals(a.values().begin(), a.values().end());
  const std::size_t n = a.rows();
  for (std::size_t i = 0; i < n; ++i) {
    for (Index p = rp[i]; p < rp[i + 1]; ++p)
      if (static_cast<std::size_t>(ci[p]) == i) diag_pos_[i] = p;
    detail::require(diag_pos_[i] >= 0, "Ilu0: missing diagonal entry");
  }
  std::vector<Index> where(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    for (Index p = rp[i]; p < rp[i + 1]; ++p) where[ci[p]] = p;
    for (Index p = rp[i]; p < rp[i + 1] && static_cast<std::size_t>(ci[p]) < i; ++p) {
      const Index k = ci[p];
      const double pivot = vals[diag_pos_[k]];
      if (pivot == 0.0) throw SolverError("Ilu0: zero pivot", 0.0);
      vals[p] /= pivot;
      const double lik = vals[p];
      for (Index q = diag_pos_[k] + 1; q < rp[k + 1]; ++q) {
        const Index pos = where[ci[q]];
        if (pos >= 0) vals[pos] -= lik * vals[q];
      }
    }
    for (Index p = rp[i]; p < rp[i + 1]; ++p) where[ci[p]] = -1;
  }
  factors_ = CsrMatrix(n, n, {rp.begin(), rp.end()}, {ci.begin(), ci.end()}, std::move(vals));
}

Vector Ilu0::apply(std::span<const double> r) const {
  const std::size_t n = factors_.rows();
  detail::require(r.size() == n, "Ilu0::apply: length mismatch");
  const auto rp = factors_.row_ptr();
  const auto ci = factors_.col_idx();
  const auto v = factors_.values();
  Vector z(r.begin(), r.end());
  for (std::size_t i = 0; i < n; ++i) {
    double s = z[i];
    for (Index p = rp[i]; p < diag_pos_[i]; ++p) s -= v[p] * z[ci[p]];
    z[i] = s;
  }
  for (std::size_t i = n; i-- > 0;) {
    double s = z[i];
    for (Index p = diag_pos_[i] + 1; p < rp[i + 1]; ++p) s -= v[p] * z[ci[p]];
    z[i] = s / v[diag_pos_[i]];
  }
  return z;
}

GmresResult gmres_solve(const CsrMatrix& m, std::span<const double> b, const GmresOptions& options,
                        const Ilu0* precond, std::optional<std::span<const double>> x0) {
  detail::require(m.rows() == m.cols(), "gmres_solve: matrix must be square");
  detail::require(b.size() == m.rows(), "gmres_solve: length mismatch");
  detail::require(options.restart >= 1, "gmres_solve: restart must be positive");
  detail::require(all_finite(b), "gmres_solve: right-hand side is not finite");
  const std::size_t n = m.rows();

  GmresResult result;
  result.x = x0 ? Vector(x0->begin(), x0->end()) : Vector(n, 0.0);
  const double bnorm = norm2(b);
  if (bnorm == 0.0) {
    result.x.assign(n, 0.0);
    return result;
  }
  const double target = options.tol * bnorm;
  const std::size_t restart = options.restart;
  auto precondition = [&](std::span<const double> v) {
    return precond ? precond->apply(v) : Vector(v.begin(), v.end());
  };

  double best = std::numeric_limits<double>::infinity();
  std::vector<Vector> basis;
  DenseMatrix h(restart + 1, restart);
  Vector cs(restart), sn(restart), gvec(restart + 1);
  while (true) {
    Vector r = spmv(m, result.x);
    for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - r[i];
    double beta = norm2(r);
    best = std::min(best, beta / bnorm);
    result.relative_residual = beta / bnorm;
    if (beta <= target) return result;
    if (result.iterations >= options.max_iterations)
      throw SolverError("gmres_solve: no convergence after " +
                            std::to_string(result.iterations) + " iterations",
                        best);

    basis.assign(1, scaled(1.0 / beta, r));
    std::fill(gvec.begin(), gvec.end(), 0.0);
    gvec[0] = beta;
    std::vector<double> history{beta / bnorm};
    std::size_t j = 0;
    for (; j < restart && result.iterations < options.max_iterations; ++j) {
      ++result.iterations;
      Vector w = spmv(m, precondition(basis[j]));
      for (std::size_t i = 0; i <= j; ++i) {
        h(i, j) = dot(w, basis[i]);
        axpy(-h(i, j), basis[i], w);
      }
      h(j + 1, j) = norm2(w);
      for (std::size_t i = 0; i < j; ++i) {
        const double t = cs[i] * h(i, j) + sn[i] * h(i + 1, j);
        h(i + 1, j) = -sn[i] * h(i, j) + cs[i] * h(i + 1, j);
        h(i, j) = t;
      }
      const double denom = std::hypot(h(j, j), h(j + 1, j));
      const double hnext = h(j + 1, j);
      cs[j] = denom == 0.0 ? 1.0 : h(j, j) / denom;
      sn[j] = denom == 0.0 ? 0.0 : hnext / denom;
      h(j, j) = denom;
      h(j + 1, j) = 0.0;
      gvec[j + 1] = -sn[j] * gvec[j];
      gvec[j] = cs[j] * gvec[j];
      history.push_back(std::abs(gvec[j + 1]) / bnorm);
      if (hnext > 0.0) basis.push_back(scaled(1.0 / hnext, w));
      if (std::abs(gvec[j + 1]) <= target || hnext == 0.0) {
        ++j;
        break;
      }
    }
    // Back substitution for the cycle's correction.
    Vector y(j);
    for (std::size_t i = j; i-- > 0;) {
      double s = gvec[i];
      for (std::size_t k = i + 1; k < j; ++k) s -= h(i, k) * y[k];
      y[i] = s / h(i, i);
    }
    Vector update(n, 0.0);
    for (std::size_t i = 0; i < j; ++i) axpy(y[i], basis[i], update);
    const Vector correction = precondition(update);
    axpy(1.0, correction, result.x);
    result.cycle_residuals.push_back(std::move(history));
  }
}

}  // namespace expint
