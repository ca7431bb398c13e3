#pragma once

#include <optional>
#include <span>

#include "expint/ebk.hpp"
#include "expint/fem.hpp"
#include "expint/integrators.hpp"

namespace expint {

struct AlphaValue {
  double value = 0.0;
  double derivative = 0.0;
};

/// alpha(t) = 1 - exp(-t/300) + exp(-t/100) and its derivative.
AlphaValue alpha(double t);

struct TestProblem {
  int id = 0;
  DiscreteOperator op;
  Vector v;
  SourceFunction g;
  double horizon = 1000.0;
  SourceFunction exact;  // y_ex(t) when known
  std::optional<Vector> exact_final;
  std::optional<Vector> reference_final;

  /// exact_final when known, otherwise reference_final.
  const Vector& target() const;
};

/// y_ex(t) = alpha(t) w with w = A^{-1} g_bc + T phi(-TA) g_peak and
/// g = y_ex' + A y_ex.
TestProblem build_test1(DiscreteOperator op, double horizon = 1000.0);

/// g(t) = alpha(t) g_bc, v = -T phi(-TA) g_peak. No reference attached; see
/// reference_solution.
TestProblem build_test2(DiscreteOperator op, double horizon = 1000.0);

struct ReferenceOptions {
  std::size_t steps = 4000;  // EE2 steps on [0, T]
  double engine_tol = 1e-10;
  double ebk_tol = 1e-10;
  std::size_t ebk_snapshots = 401;
  double agreement = 1e-7;
};

struct ReferenceReport {
  Vector y;
  double cross_check = 0.0;  // relative EE2/RT vs EBK difference
  std::size_t ee2_matvecs = 0;
  std::size_t ebk_matvecs = 0;
};

/// EE2/RT with a tiny step, accepted only if an EBK solve with cubic source
/// model agrees to `agreement` (relative). Disagreement throws SolverError.
ReferenceReport reference_solution(const TestProblem& problem, const ReferenceOptions& opts = {});

/// ||y - y_star|| / ||y_star||
double relative_error(std::span<const double> y, std::span<const double> y_star);

}  // namespace expint
