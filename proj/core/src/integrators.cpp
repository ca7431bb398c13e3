#include "expint/integrators.hpp"

#include <chrono>
#include <cmath>
#include <string>

namespace expint {

TimeGrid TimeGrid::uniform(double t0, double t_end, double dt) {
  detail::require(dt > 0.0, "TimeGrid: dt must be positive");
  detail::require(t_end > t0, "TimeGrid: empty interval");
  const double steps = (t_end - t0) / dt;
  const double rounded = std::round(steps);
  detail::require(rounded >= 1.0 && std::abs(rounded * dt - (t_end - t0)) <=
                                         1e-12 * std::max(1.0, std::abs(t_end - t0)),
                  "TimeGrid: dt must divide the interval");
  return {t0, t_end, dt, static_cast<std::size_t>(rounded)};
}

Vector exp_euler_step(const CsrMatrix& a, std::span<const double> y, std::span<const double> g,
                      double dt, const PhiEngineOptions& engine, PhiEvalReport* work,
                      double anorm1) {
  detail::require(dt > 0.0, "exp_euler_step: dt must be positive");
  PhivOptions opt;
  opt.tol = engine.tol;
  opt.anorm1 = anorm1;
  PhivResult r;
  if (engine.engine == PhiEngine::ResidualTime) {
    opt.krylov_dim = engine.krylov_dim ? engine.krylov_dim : 100;
    r = phiv_rt(a, y, g, dt, opt);
  } else {
    opt.krylov_dim = engine.krylov_dim ? engine.krylov_dim : 30;
    r = phiv_expokit(a, y, g, dt, opt);
  }
  if (work) *work += r.report;
  return std::move(r.y);
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

Vector run_exp_euler(const CsrMatrix& a, std::span<const double> v, const SourceFunction& g,
                     const TimeGrid& grid, const PhiEngineOptions& engine, double anorm1,
                     PhiEvalReport& work, const StepObserver& observer) {
  Vector y(v.begin(), v.end());
  for (std::size_t n = 0; n < grid.n_steps; ++n) {
    const Vector gn = g(grid.time(n));
    y = exp_euler_step(a, y, gn, grid.dt, engine, &work, anorm1);
    if (observer) observer(n + 1, grid.time(n + 1), y);
  }
  return y;
}

}  // namespace

RunReport exp_euler_solve(const CsrMatrix& a, std::span<const double> v, const SourceFunction& g,
                          const TimeGrid& grid, const PhiEngineOptions& engine,
                          const StepObserver& observer) {
  const auto start = Clock::now();
  PhiEvalReport work;
  RunReport rep;
  rep.y_final = run_exp_euler(a, v, g, grid, engine, norm1(a), work, observer);
  rep.fevals = work.matvecs;
  rep.wall_seconds = seconds_since(start);
  return rep;
}

RunReport ee2_solve(const CsrMatrix& a, std::span<const double> v, const SourceFunction& g,
                    const TimeGrid& grid, const PhiEngineOptions& engine,
                    const StepObserver& observer) {
  const auto start = Clock::now();
  const double anorm1 = norm1(a);
  PhiEvalReport work;
  const Vector coarse = run_exp_euler(a, v, g, grid, engine, anorm1, work, {});
  const Vector fine = run_exp_euler(a, v, g, grid.refined(), engine, anorm1, work, observer);
  RunReport rep;
  rep.y_final = linear_combination(2.0, fine, -1.0, coarse);
  rep.fevals = work.matvecs;
  rep.wall_seconds = seconds_since(start);
  return rep;
}

RunReport ros2_solve(const CsrMatrix& a, const CsrMatrix& a_hat, std::span<const double> v,
                     const SourceFunction& g, const TimeGrid& grid, const GmresOptions& solver,
                     const StepObserver& observer) {
  detail::require(a.rows() == a_hat.rows() && a.cols() == a_hat.cols(),
                  "ros2_solve: A and A_hat shapes differ");
  detail::require(v.size() == a.rows(), "ros2_solve: initial value length mismatch");
  const auto start = Clock::now();
  const double dt = grid.dt;
  const CsrMatrix stage = shifted(a_hat, 1.0, dt);  // I - gamma dt J with J = -A_hat
  const Ilu0 ilu(stage);

  RunReport rep;
  Vector y(v.begin(), v.end());
  const std::size_t n = y.size();
  auto f = [&](double t, std::span<const double> yy) {
    Vector out = g(t);
    const Vector ay = spmv(a, yy);
    ++rep.fevals;
    for (std::size_t i = 0; i < n; ++i) out[i] -= ay[i];
    return out;
  };
  auto solve = [&](const Vector& rhs, std::size_t step) {
    try {
      GmresResult r = gmres_solve(stage, rhs, solver, &ilu);
      ++rep.linear_solves;
      rep.inner_iterations += r.iterations;
      return std::move(r.x);
    } catch (const SolverError& e) {
      throw SolverError("ros2_solve: linear solve failed at step " + std::to_string(step) + ": " +
                            e.what(),
                        e.best_residual());
    }
  };

  for (std::size_t step = 0; step < grid.n_steps; ++step) {
    const double t = grid.time(step);
    const Vector k1 = solve(f(t, y), step);
    Vector stage_y = y;
    axpy(dt, k1, stage_y);
    Vector rhs2 = f(grid.time(step + 1), stage_y);
    axpy(-2.0, k1, rhs2);
    const Vector k2 = solve(rhs2, step);
    axpy(1.5 * dt, k1, y);
    axpy(0.5 * dt, k2, y);
    if (observer) observer(step + 1, grid.time(step + 1), y);
    if (!all_finite(y)) break;
  }
  rep.y_final = std::move(y);
  rep.wall_seconds = seconds_since(start);
  return rep;
}

}  // namespace expint
