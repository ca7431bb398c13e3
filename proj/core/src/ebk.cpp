#include "expint/ebk.hpp"

#include <algorithm>
#include <cmath>

#include "expint/expm.hpp"

namespace expint {

Vector advance_polynomial_forcing(const DenseMatrix& h, std::span<const double> u0,
                                  const std::vector<Vector>& coeffs, double s) {
  detail::require(h.square(), "advance_polynomial_forcing: H must be square");
  detail::require(u0.size() == h.rows(), "advance_polynomial_forcing: u0 length mismatch");
  detail::require(!coeffs.empty(), "advance_polynomial_forcing: need forcing coefficients");
  if (s == 0.0) return Vector(u0.begin(), u0.end());
  const std::size_t n = h.rows();
  std::vector<Vector> w;
  w.reserve(coeffs.size());
  double factor = s;  // j! s^{j+1}
  for (std::size_t j = 0; j < coeffs.size(); ++j) {
    detail::require(coeffs[j].size() == n, "advance_polynomial_forcing: coefficient length");
    Vector wj = coeffs[j];
    if (j == 0) {
      const Vector hu = h * u0;
      for (std::size_t i = 0; i < n; ++i) wj[i] -= hu[i];
    } else {
      factor *= s * static_cast<double>(j);
    }
    scale(factor, wj);
    w.push_back(std::move(wj));
  }
  Vector u = phi_combination((-s) * h, w);
  axpy(1.0, u0, u);
  return u;
}

Vector project_ivp_advance(const DenseMatrix& h, std::span<const double> u0,
                           std::span<const double> w0, std::span<const double> w1, double s) {
  detail::require(s > 0.0, "project_ivp_advance: s must be positive");
  detail::require(w0.size() == w1.size(), "project_ivp_advance: forcing length mismatch");
  Vector slope(w0.size());
  for (std::size_t i = 0; i < w0.size(); ++i) slope[i] = (w1[i] - w0[i]) / s;
  return advance_polynomial_forcing(h, u0, {Vector(w0.begin(), w0.end()), slope}, s);
}

SourceApprox ebk_source(const CsrMatrix& a, std::span<const double> v, const SourceFunction& g,
                        double horizon, std::size_t n_s, std::size_t m, Interpolation interp) {
  const Vector av = spmv(a, v);
  auto shifted = [&](double t) {
    Vector gt = g(t);
    detail::require(gt.size() == av.size(), "ebk_source: source length mismatch");
    for (std::size_t i = 0; i < gt.size(); ++i) gt[i] -= av[i];
    return gt;
  };
  return build_source_approx(shifted, horizon, n_s, m, interp);
}

namespace {

// Projected forcing E1 c_j for the local polynomial of interval i.
std::vector<Vector> embedded_polynomial(const SourceApprox& src, std::size_t i, std::size_t dim) {
  const auto c = src.local_polynomial(i);
  std::vector<Vector> out(src.polynomial_degree() + 1, Vector(dim, 0.0));
  for (std::size_t j = 0; j < out.size(); ++j)
    for (std::size_t r = 0; r < src.rank(); ++r) out[j][r] = c[j][r];
  return out;
}

}  // namespace

EbkSolution ebk_solve(const CsrMatrix& a, std::span<const double> v, const SourceApprox& src,
                      const EbkOptions& options) {
  detail::require(options.tol > 0.0, "ebk_solve: tol must be positive");
  detail::require(options.k_max >= 1, "ebk_solve: k_max must be positive");
  detail::require(a.rows() == a.cols() && v.size() == a.rows(), "ebk_solve: dimension mismatch");
  detail::require(src.dimension() == a.rows(), "ebk_solve: source model dimension mismatch");

  EbkSolution sol;
  sol.v_.assign(v.begin(), v.end());
  sol.src_ = src;
  EbkReport& rep = sol.report_;

  const std::size_t n_s = src.times.size();
  const double scale_ref = *std::max_element(src.snapshot_norms.begin(), src.snapshot_norms.end());
  if (scale_ref == 0.0) {
    // g - A v vanishes at every snapshot: y stays at v.
    sol.h_ = DenseMatrix(0, 0);
    sol.u_at_snapshots_.assign(n_s, Vector{});
    return sol;
  }
  const double threshold = options.tol * scale_ref;
  const double hs = src.spacing();
  const std::size_t deg = src.polynomial_degree();

  BlockKrylovBasis basis = start_block_krylov(src.basis, options.k_max, norm1(a));
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k <= options.k_max; ++k) {
    const std::size_t used = block_arnoldi_extend(a, basis);
    if (used == 0) break;
    rep.matvecs += used;
    rep.k_final = k;
    const std::size_t dim = basis.dim();
    const DenseMatrix hk = basis.square();

    // Propagators for one snapshot interval: e^{-sH} and phi_j(-sH) E1.
    const PhiBlocks blocks = phi_blocks((-hs) * hk, basis.e1(), deg + 1);
    std::vector<Vector> u(n_s, Vector(dim, 0.0));
    for (std::size_t i = 0; i + 1 < n_s; ++i) {
      Vector next = blocks.exp * std::span<const double>(u[i]);
      const auto c = src.local_polynomial(i);
      double factor = hs;
      for (std::size_t j = 0; j <= deg; ++j) {
        if (j > 0) factor *= hs * static_cast<double>(j);
        const Vector pj = blocks.phi_times_e[j] * std::span<const double>(c[j]);
        axpy(factor, pj, next);
      }
      u[i + 1] = std::move(next);
    }

    rep.residual_profile.assign(n_s, 0.0);
    double worst = 0.0;
    if (!basis.breakdown) {
      const DenseMatrix sub = basis.subdiagonal();
      const std::size_t c0 = basis.offsets[basis.blocks() - 1];
      for (std::size_t i = 0; i < n_s; ++i) {
        const Vector tail(u[i].begin() + static_cast<std::ptrdiff_t>(c0), u[i].end());
        const double res = norm2(sub * std::span<const double>(tail));
        rep.residual_profile[i] = res / scale_ref;
        worst = std::max(worst, res);
      }
    }
    rep.residual_max = worst / scale_ref;
    rep.residual_history.push_back(rep.residual_max);
    rep.dim = dim;
    rep.breakdown = basis.breakdown;
    best = std::min(best, rep.residual_max);

    if (worst <= threshold || basis.breakdown) {
      sol.basis_.assign(basis.v.begin(), basis.v.begin() + static_cast<std::ptrdiff_t>(dim));
      sol.h_ = hk;
      sol.u_at_snapshots_ = std::move(u);
      return sol;
    }
  }
  throw EbkFailure("ebk_solve: residual tolerance not met within k_max block iterations", best,
                   rep);
}

Vector EbkSolution::evaluate(double t) const {
  detail::require(t >= 0.0 && t <= horizon() * (1.0 + 1e-14), "EbkSolution: t outside [0, T]");
  if (basis_.empty()) return v_;
  const std::size_t i = src_.interval(t);
  const double sigma = t - src_.times[i];
  const Vector u = sigma > 0.0
                       ? advance_polynomial_forcing(h_, u_at_snapshots_[i],
                                                    embedded_polynomial(src_, i, h_.rows()), sigma)
                       : u_at_snapshots_[i];
  Vector y = v_;
  for (std::size_t c = 0; c < basis_.size(); ++c) axpy(u[c], basis_[c], y);
  return y;
}

Vector EbkSolution::final_value() const {
  if (basis_.empty()) return v_;
  Vector y = v_;
  const Vector& u = u_at_snapshots_.back();
  for (std::size_t c = 0; c < basis_.size(); ++c) axpy(u[c], basis_[c], y);
  return y;
}

}  // namespace expint
