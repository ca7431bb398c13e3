#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "expint/error.hpp"

namespace expint {

using Vector = std::vector<double>;

inline double dot(std::span<const double> x, std::span<const double> y) {
  detail::require(x.size() == y.size(), "dot: length mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

inline double norm2(std::span<const double> x) {
  // Scaled accumulation keeps huge/tiny entries from overflowing.
  double scale = 0.0;
  double ssq = 1.0;
  for (double v : x) {
    if (v != 0.0) {
      const double a = std::abs(v);
      if (scale < a) {
        ssq = 1.0 + ssq * (scale / a) * (scale / a);
        scale = a;
      } else {
        ssq += (a / scale) * (a / scale);
      }
    }
  }
  return scale * std::sqrt(ssq);
}

inline double norm_inf(std::span<const double> x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  return m;
}

/// y += a * x
inline void axpy(double a, std::span<const double> x, std::span<double> y) {
  detail::require(x.size() == y.size(), "axpy: length mismatch");
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

inline void scale(double a, std::span<double> x) {
  for (double& v : x) v *= a;
}

inline Vector scaled(double a, std::span<const double> x) {
  Vector out(x.begin(), x.end());
  scale(a, out);
  return out;
}

/// a*x + b*y
inline Vector linear_combination(double a, std::span<const double> x, double b,
                                 std::span<const double> y) {
  detail::require(x.size() == y.size(), "linear_combination: length mismatch");
  Vector out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = a * x[i] + b * y[i];
  return out;
}

inline bool all_finite(std::span<const double> x) {
  for (double v : x)
    if (!std::isfinite(v)) return false;
  return true;
}

}  // namespace expint
