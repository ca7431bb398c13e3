#include "expint/problems.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include "expint/gmres.hpp"
#include "expint/phiv.hpp"

namespace expint {

AlphaValue alpha(double t) {
  detail::require(t >= 0.0, "alpha: t must be non-negative");
  const double e3 = std::exp(-t / 300.0);
  const double e1 = std::exp(-t / 100.0);
  return {1.0 - e3 + e1, e3 / 300.0 - e1 / 100.0};
}

const Vector& TestProblem::target() const {
  if (exact_final) return *exact_final;
  detail::require(reference_final.has_value(), "TestProblem: no exact or reference solution");
  return *reference_final;
}

namespace {

Vector peak_response(const DiscreteOperator& op, double horizon) {
  PhivOptions opt;
  opt.tol = 1e-10;
  const Vector zero(op.size(), 0.0);
  try {
    return phiv_rt(op.a, zero, op.g_peak, horizon, opt).y;
  } catch (const SolverError& e) {
    throw SolverError(std::string("test setup: phi(-TA) g_peak failed: ") + e.what(),
                      e.best_residual());
  }
}

}  // namespace

TestProblem build_test1(DiscreteOperator op, double horizon) {
  detail::require(horizon > 0.0, "build_test1: T must be positive");
  GmresOptions gopt;
  gopt.tol = 1e-12;
  const Ilu0 ilu(op.a);
  Vector w;
  try {
    w = gmres_solve(op.a, op.g_bc, gopt, &ilu).x;
  } catch (const SolverError& e) {
    throw SolverError(std::string("test setup: A^{-1} g_bc failed: ") + e.what(),
                      e.best_residual());
  }
  const Vector peak = peak_response(op, horizon);
  axpy(1.0, peak, w);
  const Vector aw = spmv(op.a, w);

  TestProblem p;
  p.id = 1;
  p.horizon = horizon;
  p.v = scaled(alpha(0.0).value, w);
  p.exact_final = scaled(alpha(horizon).value, w);
  p.exact = [w](double t) { return scaled(alpha(t).value, w); };
  p.g = [w, aw](double t) {
    const AlphaValue al = alpha(t);
    return linear_combination(al.derivative, w, al.value, aw);
  };
  p.op = std::move(op);
  return p;
}

TestProblem build_test2(DiscreteOperator op, double horizon) {
  detail::require(horizon > 0.0, "build_test2: T must be positive");
  TestProblem p;
  p.id = 2;
  p.horizon = horizon;
  p.v = scaled(-1.0, peak_response(op, horizon));
  p.g = [gbc = op.g_bc](double t) { return scaled(alpha(t).value, gbc); };
  p.op = std::move(op);
  return p;
}

ReferenceReport reference_solution(const TestProblem& problem, const ReferenceOptions& opts) {
  detail::require(opts.steps >= 1, "reference_solution: steps must be positive");
  const TimeGrid grid =
      TimeGrid::uniform(0.0, problem.horizon, problem.horizon / static_cast<double>(opts.steps));
  PhiEngineOptions engine;
  engine.engine = PhiEngine::ResidualTime;
  engine.tol = opts.engine_tol;
  const RunReport ee2 = ee2_solve(problem.op.a, problem.v, problem.g, grid, engine);

  const SourceApprox src = ebk_source(problem.op.a, problem.v, problem.g, problem.horizon,
                                      opts.ebk_snapshots, 2, Interpolation::CubicHermite);
  EbkOptions eopt;
  eopt.tol = opts.ebk_tol;
  const EbkSolution ebk = ebk_solve(problem.op.a, problem.v, src, eopt);
  const Vector y_ebk = ebk.final_value();

  ReferenceReport rep;
  rep.cross_check = relative_error(y_ebk, ee2.y_final);
  rep.ee2_matvecs = ee2.fevals;
  rep.ebk_matvecs = ebk.report().matvecs;
  if (!(rep.cross_check <= opts.agreement)) {
    char msg[128];
    std::snprintf(msg, sizeof msg,
                  "reference_solution: EE2/RT and EBK disagree (relative difference %.3e)",
                  rep.cross_check);
    throw SolverError(msg, rep.cross_check);
  }
  rep.y = ee2.y_final;
  return rep;
}

double relative_error(std::span<const double> y, std::span<const double> y_star) {
  detail::require(y.size() == y_star.size(), "relative_error: length mismatch");
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double d = y[i] - y_star[i];
    num += d * d;
    den += y_star[i] * y_star[i];
  }
  detail::require(den > 0.0, "relative_error: reference has zero norm");
  return std::sqrt(num / den);
}

}  // namespace expint
