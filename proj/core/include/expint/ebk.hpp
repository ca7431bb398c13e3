#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "expint/block_arnoldi.hpp"
#include "expint/csr.hpp"
#include "expint/error.hpp"
#include "expint/source_approx.hpp"

namespace expint {

/// Exact solution at time s of u' = -H u + w0 + (sigma/s)(w1 - w0), u(0) = u0.
Vector project_ivp_advance(const DenseMatrix& h, std::span<const double> u0,
                           std::span<const double> w0, std::span<const double> w1, double s);

/// Exact solution at time s of u' = -H u + sum_j c_j sigma^j, u(0) = u0:
///   u(s) = u0 + s phi_1(-sH)(c_0 - H u0) + sum_{j>=1} j! s^{j+1} phi_{j+1}(-sH) c_j
Vector advance_polynomial_forcing(const DenseMatrix& h, std::span<const double> u0,
                                  const std::vector<Vector>& coeffs, double s);

struct EbkOptions {
  double tol = 1e-6;        // relative to max_i ||g(t_i) - A v||
  std::size_t k_max = 100;  // block iterations
};

struct EbkReport {
  std::size_t matvecs = 0;  // block columns count individually
  std::size_t k_final = 0;
  std::size_t dim = 0;      // final projection dimension
  bool breakdown = false;
  double residual_max = 0.0;          // relative, on the snapshot grid
  std::vector<double> residual_history;  // relative max residual per iteration
  Vector residual_profile;               // relative residual at each snapshot time
};

/// The residual never met the tolerance within k_max block iterations.
class EbkFailure : public SolverError {
 public:
  EbkFailure(const std::string& what, double best, EbkReport report)
      : SolverError(what, best), report_(std::move(report)) {}
  const EbkReport& report() const noexcept { return report_; }

 private:
  EbkReport report_;
};

/// y(t) = v + V u(t) on [0, T].
class EbkSolution {
 public:
  Vector evaluate(double t) const;
  Vector final_value() const;
  const EbkReport& report() const noexcept { return report_; }
  double horizon() const noexcept { return src_.horizon(); }

 private:
  friend EbkSolution ebk_solve(const CsrMatrix&, std::span<const double>, const SourceApprox&,
                               const EbkOptions&);
  Vector v_;
  std::vector<Vector> basis_;      // first dim columns of V
  DenseMatrix h_;                  // dim x dim
  std::vector<Vector> u_at_snapshots_;
  SourceApprox src_;
  EbkReport report_;
};

/// Source model for the shifted problem: snapshots of g(t) - A v.
SourceApprox ebk_source(const CsrMatrix& a, std::span<const double> v, const SourceFunction& g,
                        double horizon, std::size_t n_s, std::size_t m,
                        Interpolation interp = Interpolation::CubicHermite);

/// Exponential block Krylov solve of y' = -A y + g(t), y(0) = v, where `src`
/// models g(t) - A v (see ebk_source). Block iterations stop once the
/// residual of the projected solution, evaluated on the snapshot grid, is
/// below tol * max_i ||g(t_i) - A v||.
EbkSolution ebk_solve(const CsrMatrix& a, std::span<const double> v, const SourceApprox& src,
                      const EbkOptions& options = {});

}  // namespace expint
