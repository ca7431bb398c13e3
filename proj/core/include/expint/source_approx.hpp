#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <vector>

#include "expint/dense.hpp"

namespace expint {

/// Time-dependent source g(t).
using SourceFunction = std::function<Vector(double)>;

enum class Interpolation {
  Linear,        // piecewise-linear p(t), second order
  CubicHermite,  // piecewise-cubic Hermite with fourth-order slope estimates
};

/// Low-rank source model g(t) ~ U p(t) from uniformly spaced snapshots.
struct SourceApprox {
  std::vector<Vector> basis;   // U, m orthonormal columns of length N
  Vector times;                // n_s uniform snapshot times on [0, T]
  DenseMatrix coeffs;          // m x n_s, column i = U^T g(t_i)
  DenseMatrix slopes;          // m x n_s, dp/dt estimates (cubic mode only)
  Vector singular_values;      // full spectrum of the snapshot matrix
  Vector snapshot_norms;       // ||g(t_i)||
  Interpolation interpolation = Interpolation::Linear;

  std::size_t rank() const noexcept { return basis.size(); }
  std::size_t dimension() const noexcept { return basis.empty() ? 0 : basis.front().size(); }
  double horizon() const noexcept { return times.back(); }
  double spacing() const noexcept { return times[1] - times[0]; }
  /// sigma_{m+1}, the bound on ||g(t_i) - U p(t_i)|| at the snapshots.
  double truncation_bound() const noexcept;

  /// Interval index containing t (clamped to [0, n_s - 2]).
  std::size_t interval(double t) const;
  /// Coefficients c_0..c_3 of p(t_i + s) = sum_j c_j s^j on interval i.
  std::array<Vector, 4> local_polynomial(std::size_t i) const;
  std::size_t polynomial_degree() const noexcept {
    return interpolation == Interpolation::Linear ? 1 : 3;
  }

  Vector coefficients(double t) const;  // p(t)
  Vector evaluate(double t) const;      // U p(t)
};

/// Samples g at n_s uniform times on [0,T] (both endpoints included), takes
/// the thin SVD of the N x n_s snapshot matrix and keeps m left singular
/// vectors.
SourceApprox build_source_approx(const SourceFunction& g, double horizon, std::size_t n_s,
                                 std::size_t m, Interpolation interp = Interpolation::Linear);

/// A-posteriori check of the model on a grid `refine` times finer than the
/// snapshots: max_t ||g(t) - offset - U p(t)|| and the trapezoidal ratio
/// int ||g - offset - U p|| / int ||g||.
struct ApproxError {
  double max_error = 0.0;
  double relative_integral_error = 0.0;
};
ApproxError approximation_error(const SourceApprox& src, const SourceFunction& g,
                                std::span<const double> offset = {}, std::size_t refine = 10);

}  // namespace expint
