#pragma once

#include <cstddef>
#include <functional>
#include <span>

#include "expint/csr.hpp"
#include "expint/gmres.hpp"
#include "expint/phiv.hpp"
#include "expint/source_approx.hpp"

namespace expint {

/// Uniform grid t0, t0 + dt, ..., T. dt must divide T - t0.
struct TimeGrid {
  double t0 = 0.0;
  double t_end = 0.0;
  double dt = 0.0;
  std::size_t n_steps = 0;

  static TimeGrid uniform(double t0, double t_end, double dt);
  double time(std::size_t n) const noexcept {
    return n == n_steps ? t_end : t0 + dt * static_cast<double>(n);
  }
  TimeGrid refined() const { return uniform(t0, t_end, dt / 2.0); }
};

/// Work and outcome of one integration run.
struct RunReport {
  Vector y_final;
  std::size_t fevals = 0;         // products with A (matvecs)
  std::size_t linear_solves = 0;
  std::size_t inner_iterations = 0;  // GMRES iterations behind the solves
  double wall_seconds = 0.0;
  double error = 0.0;             // filled by the harness
};

/// Called after every completed step with the step index (1-based) and state.
using StepObserver = std::function<void(std::size_t step, double t, std::span<const double> y)>;

enum class PhiEngine { ResidualTime, Expokit };

struct PhiEngineOptions {
  PhiEngine engine = PhiEngine::ResidualTime;
  double tol = 1e-4;
  /// 0 selects the engine default (100 for RT, 30 for EXPOKIT).
  std::size_t krylov_dim = 0;
};

/// y_n + dt phi(-dt A)(g_n - A y_n), with the phi action from the engine.
Vector exp_euler_step(const CsrMatrix& a, std::span<const double> y, std::span<const double> g,
                      double dt, const PhiEngineOptions& engine, PhiEvalReport* work = nullptr,
                      double anorm1 = 0.0);

/// Exponential Euler with g frozen at each step's left endpoint.
RunReport exp_euler_solve(const CsrMatrix& a, std::span<const double> v, const SourceFunction& g,
                          const TimeGrid& grid, const PhiEngineOptions& engine,
                          const StepObserver& observer = {});

/// Globally extrapolated exponential Euler: 2 y_{dt/2}(T) - y_{dt}(T).
/// The observer sees the dt/2 run.
RunReport ee2_solve(const CsrMatrix& a, std::span<const double> v, const SourceFunction& g,
                    const TimeGrid& grid, const PhiEngineOptions& engine,
                    const StepObserver& observer = {});

/// Two-stage Rosenbrock ROS2 with gamma = 1 for y' = -A y + g(t):
///   (I + dt A_hat) k1 = f(t_n, y_n)
///   (I + dt A_hat) k2 = f(t_{n+1}, y_n + dt k1) - 2 k1
///   y_{n+1} = y_n + 3/2 dt k1 + 1/2 dt k2
/// A_hat is A itself or its diffusion part. The stage matrix and its ILU(0)
/// preconditioner are built once per run.
RunReport ros2_solve(const CsrMatrix& a, const CsrMatrix& a_hat, std::span<const double> v,
                     const SourceFunction& g, const TimeGrid& grid,
                     const GmresOptions& solver = {}, const StepObserver& observer = {});

}  // namespace expint
