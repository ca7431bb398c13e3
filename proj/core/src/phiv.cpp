#include "expint/phiv.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <string>

#include "expint/expm.hpp"

namespace expint {

PhiEvalReport& PhiEvalReport::operator+=(const PhiEvalReport& o) {
  matvecs += o.matvecs;
  arnoldi_steps += o.arnoldi_steps;
  restarts += o.restarts;
  substeps += o.substeps;
  rejections += o.rejections;
  final_residual = std::max(final_residual, o.final_residual);
  return *this;
}

namespace {

constexpr int kBacktrackPoints = 64;
constexpr double kBacktrackOctaves = 20.0;

Vector residual_vector(const CsrMatrix& a, std::span<const double> y, std::span<const double> g) {
  Vector r = spmv(a, y);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = g[i] - r[i];
  return r;
}

void validate(const CsrMatrix& a, std::span<const double> v, std::span<const double> g,
              double t_end, const PhivOptions& options, std::size_t min_dim) {
  detail::require(a.rows() == a.cols(), "phiv: matrix must be square");
  detail::require(v.size() == a.rows() && g.size() == a.rows(), "phiv: vector length mismatch");
  detail::require(options.tol > 0.0, "phiv: tol must be positive");
  detail::require(options.krylov_dim >= min_dim, "phiv: Krylov dimension too small");
  detail::require(t_end >= 0.0, "phiv: t_end must be nonnegative");
}

// Residual checks cost a small dense exponential each; skip some once the
// basis is large.
bool check_residual_at(std::size_t k, std::size_t cap) {
  return k <= 8 || (k <= 32 && k % 4 == 0) || k % 8 == 0 || k == cap;
}

// Round to two significant digits, upward, as EXPOKIT does.
double round_step(double tau) {
  const double s = std::pow(10.0, std::round(std::log10(tau)) - 1.0);
  return std::ceil(tau / s) * s;
}

}  // namespace

PhivResult phiv_rt(const CsrMatrix& a, std::span<const double> v, std::span<const double> g,
                   double t_end, const PhivOptions& options) {
  validate(a, v, g, t_end, options, 2);
  PhivResult out;
  out.y.assign(v.begin(), v.end());
  if (t_end == 0.0) return out;

  const double anorm = options.anorm1 > 0.0 ? options.anorm1 : norm1(a);
  Vector r = residual_vector(a, out.y, g);
  ++out.report.matvecs;
  const double threshold = options.tol * norm2(r);
  if (threshold == 0.0) return out;
  const double beta0 = threshold / options.tol;

  double t_rem = t_end;
  while (true) {
    KrylovBasis basis = start_krylov(r, options.krylov_dim, anorm);
    while (!basis.breakdown && !basis.full()) {
      arnoldi_extend(a, basis);
      ++out.report.arnoldi_steps;
      ++out.report.matvecs;
      if (!basis.breakdown && !check_residual_at(basis.k, basis.capacity())) continue;
      const Vector u = galerkin_solution(basis, Vector(basis.k, 0.0), t_rem);
      const double res = exp_residual_norm(basis, u);
      if (res <= threshold) {
        out.y = krylov_reconstruct(basis, out.y, u);
        out.report.final_residual = res / beta0;
        if (options.trace)
          *options.trace << out.report.restarts << ',' << basis.k << ',' << t_rem << ','
                         << res / beta0 << '\n';
        return out;
      }
    }

    // Basis exhausted: advance to the largest grid time meeting the test.
    // The residual grows with delta, so the grid is searched by bisection.
    const Vector zero(basis.k, 0.0);
    auto grid_time = [&](int j) {
      return t_rem * std::exp2(-kBacktrackOctaves * j / static_cast<double>(kBacktrackPoints - 1));
    };
    int lo = 0;                     // fails (t_rem itself)
    int hi = kBacktrackPoints - 1;  // candidate
    Vector u_hi = galerkin_solution(basis, zero, grid_time(hi));
    double res_hi = exp_residual_norm(basis, u_hi);
    double smallest = res_hi;
    bool advanced = res_hi <= threshold;
    while (advanced && hi - lo > 1) {
      const int mid = (lo + hi) / 2;
      Vector u = galerkin_solution(basis, zero, grid_time(mid));
      const double res = exp_residual_norm(basis, u);
      smallest = std::min(smallest, res);
      if (res <= threshold) {
        hi = mid;
        u_hi = std::move(u);
        res_hi = res;
      } else {
        lo = mid;
      }
    }
    if (advanced) {
      const double delta = grid_time(hi);
      out.y = krylov_reconstruct(basis, out.y, u_hi);
      t_rem -= delta;
      if (options.trace)
        *options.trace << out.report.restarts << ',' << basis.k << ',' << delta << ','
                       << res_hi / beta0 << '\n';
      ++out.report.restarts;
    }
    if (!advanced)
      throw RestartStagnation("phiv_rt: no restart time satisfies the residual tolerance",
                              smallest / beta0);
    r = residual_vector(a, out.y, g);
    ++out.report.matvecs;
    if (norm2(r) == 0.0) return out;
  }
}

PhivResult phiv_expokit(const CsrMatrix& a, std::span<const double> v, std::span<const double> g,
                        double t_end, const PhivOptions& options) {
  validate(a, v, g, t_end, options, 2);
  PhivResult out;
  out.y.assign(v.begin(), v.end());
  if (t_end == 0.0) return out;

  const double anorm1 = options.anorm1 > 0.0 ? options.anorm1 : norm1(a);
  const double anorm = std::max(norm_inf(a), std::numeric_limits<double>::min());
  const std::size_t m = std::min(options.krylov_dim, a.rows());
  const double tol = options.tol;
  constexpr double kSafety = 0.9;
  constexpr double kDelta = 1.2;

  Vector r = residual_vector(a, out.y, g);
  ++out.report.matvecs;
  const double beta0 = norm2(r);
  if (beta0 == 0.0) return out;

  // Initial step guess and acceptance test as in EXPOKIT: tol is absolute.
  const double mp1 = static_cast<double>(m + 1);
  const double log_fact = mp1 * std::log(mp1 / std::numbers::e) +
                          0.5 * std::log(2.0 * std::numbers::pi * mp1);
  double t_new = (1.0 / anorm) *
                 std::exp((log_fact + std::log(tol / (4.0 * beta0 * anorm))) / static_cast<double>(m));
  t_new = round_step(t_new);

  double t_now = 0.0;
  bool first = true;
  while (t_now < t_end) {
    if (!first) {
      r = residual_vector(a, out.y, g);
      ++out.report.matvecs;
    }
    first = false;
    double tau = std::min(t_end - t_now, t_new);

    KrylovBasis basis = start_krylov(r, m, anorm1);
    if (basis.breakdown) break;  // g - A y = 0: stationary
    while (!basis.breakdown && !basis.full()) {
      arnoldi_extend(a, basis);
      ++out.report.arnoldi_steps;
      ++out.report.matvecs;
    }
    const std::size_t mb = basis.k;
    const bool exact = basis.breakdown;
    double avnorm = 0.0;
    if (exact) {
      tau = t_end - t_now;
    } else {
      avnorm = norm2(spmv(a, basis.v[mb]));
      ++out.report.matvecs;
    }
    const std::size_t k1 = exact ? 0 : 2;
    const double xm = 1.0 / static_cast<double>(m);

    double err = 0.0;
    double xm_used = xm;
    Vector c;
    while (true) {
      // exp of [[tau*Htilde, tau*beta*e1], [0, 0]] with Htilde the Hessenberg
      // matrix of -A extended by the two EXPOKIT correction rows.
      const std::size_t dim = mb + k1 + 1;
      DenseMatrix z(dim, dim);
      for (std::size_t i = 0; i < mb; ++i)
        for (std::size_t j = 0; j < mb; ++j) z(i, j) = -tau * basis.h(i, j);
      if (!exact) {
        z(mb, mb - 1) = -tau * basis.h(mb, mb - 1);
        z(mb + 1, mb) = tau;
      }
      z(0, dim - 1) = tau * basis.beta;
      const DenseMatrix f = expm_dense(z);
      c.assign(mb + k1, 0.0);
      for (std::size_t i = 0; i < mb + k1; ++i) c[i] = f(i, dim - 1);

      if (exact) {
        err = 0.0;
        break;
      }
      const double phi1 = std::abs(c[mb]);
      const double phi2 = std::abs(c[mb + 1]) * avnorm;
      if (phi1 > 10.0 * phi2) {
        err = phi2;
        xm_used = xm;
      } else if (phi1 > phi2) {
        err = phi1 * phi2 / (phi1 - phi2);
        xm_used = xm;
      } else {
        err = phi1;
        xm_used = 1.0 / static_cast<double>(m - 1);
      }
      if (err <= kDelta * tau * tol) break;

      ++out.report.rejections;
      const double shrink = kSafety * std::pow(tau * tol / err, xm_used);
      tau = round_step(tau * std::clamp(shrink, 0.5, 0.9));
      if (tau < 1e-12 * t_end)
        throw SolverError("phiv_expokit: step size underflow", err / (tau * beta0));
    }

    // Corrected update uses mb + 1 components (the extra one along v_{mb+1}).
    const std::size_t mx = exact ? mb : mb + 1;
    for (std::size_t i = 0; i < mx; ++i) axpy(c[i], basis.v[i], out.y);
    t_now += tau;
    ++out.report.substeps;
    out.report.final_residual = std::max(out.report.final_residual, err / (tau * beta0));
    if (options.trace)
      *options.trace << out.report.substeps << ',' << mb << ',' << tau << ','
                     << err / (tau * beta0) << '\n';

    const double grow =
        err > 0.0 ? kSafety * std::pow(tau * tol / err, xm_used) : 2.0;
    t_new = round_step(tau * std::clamp(grow, 0.5, 2.0));
    if (t_end - t_now < 1e-14 * t_end) break;
  }
  return out;
}

}  // namespace expint
