#include "expint/source_approx.hpp"

#include <algorithm>
#include <cmath>

#include "expint/svd.hpp"

namespace expint {

double SourceApprox::truncation_bound() const noexcept {
  return rank() < singular_values.size() ? singular_values[rank()] : 0.0;
}

std::size_t SourceApprox::interval(double t) const {
  const std::size_t last = times.size() - 2;
  if (t <= times.front()) return 0;
  const auto i = static_cast<std::size_t>(std::floor((t - times.front()) / spacing()));
  return std::min(i, last);
}

std::array<Vector, 4> SourceApprox::local_polynomial(std::size_t i) const {
  const std::size_t m = rank();
  const double h = spacing();
  std::array<Vector, 4> c;
  for (auto& v : c) v.assign(m, 0.0);
  for (std::size_t r = 0; r < m; ++r) {
    const double p0 = coeffs(r, i), p1 = coeffs(r, i + 1);
    c[0][r] = p0;
    if (interpolation == Interpolation::Linear) {
      c[1][r] = (p1 - p0) / h;
    } else {
      const double d0 = slopes(r, i), d1 = slopes(r, i + 1);
      const double secant = (p1 - p0) / h;
      c[1][r] = d0;
      c[2][r] = (3.0 * secant - 2.0 * d0 - d1) / h;
      c[3][r] = (d0 + d1 - 2.0 * secant) / (h * h);
    }
  }
  return c;
}

Vector SourceApprox::coefficients(double t) const {
  const std::size_t i = interval(t);
  const double s = t - times[i];
  const auto c = local_polynomial(i);
  Vector p(rank());
  for (std::size_t r = 0; r < rank(); ++r)
    p[r] = c[0][r] + s * (c[1][r] + s * (c[2][r] + s * c[3][r]));
  return p;
}

Vector SourceApprox::evaluate(double t) const {
  const Vector p = coefficients(t);
  Vector out(dimension(), 0.0);
  for (std::size_t r = 0; r < rank(); ++r) axpy(p[r], basis[r], out);
  return out;
}

namespace {

// Fourth-order finite-difference slopes on a uniform grid.
DenseMatrix estimate_slopes(const DenseMatrix& p, double h) {
  const std::size_t n = p.cols();
  DenseMatrix d(p.rows(), n);
  for (std::size_t r = 0; r < p.rows(); ++r) {
    auto f = [&](std::size_t i) { return p(r, i); };
    for (std::size_t i = 0; i < n; ++i) {
      double v;
      if (i >= 2 && i + 2 < n) {
        v = f(i - 2) - 8.0 * f(i - 1) + 8.0 * f(i + 1) - f(i + 2);
      } else if (i == 0) {
        v = -25.0 * f(0) + 48.0 * f(1) - 36.0 * f(2) + 16.0 * f(3) - 3.0 * f(4);
      } else if (i == 1) {
        v = -3.0 * f(0) - 10.0 * f(1) + 18.0 * f(2) - 6.0 * f(3) + f(4);
      } else if (i == n - 2) {
        v = 3.0 * f(n - 1) + 10.0 * f(n - 2) - 18.0 * f(n - 3) + 6.0 * f(n - 4) - f(n - 5);
      } else {
        v = 25.0 * f(n - 1) - 48.0 * f(n - 2) + 36.0 * f(n - 3) - 16.0 * f(n - 4) +
            3.0 * f(n - 5);
      }
      d(r, i) = v / (12.0 * h);
    }
  }
  return d;
}

}  // namespace

SourceApprox build_source_approx(const SourceFunction& g, double horizon, std::size_t n_s,
                                 std::size_t m, Interpolation interp) {
  detail::require(m >= 1, "build_source_approx: m must be >= 1");
  detail::require(n_s >= m, "build_source_approx: need n_s >= m");
  detail::require(n_s >= 2, "build_source_approx: need at least two snapshots");
  detail::require(horizon > 0.0, "build_source_approx: horizon must be positive");
  detail::require(interp == Interpolation::Linear || n_s >= 5,
                  "build_source_approx: cubic interpolation needs n_s >= 5");

  SourceApprox src;
  src.interpolation = interp;
  src.times.resize(n_s);
  for (std::size_t i = 0; i < n_s; ++i)
    src.times[i] = horizon * static_cast<double>(i) / static_cast<double>(n_s - 1);
  src.times.back() = horizon;

  std::vector<Vector> snaps;
  snaps.reserve(n_s);
  for (double t : src.times) snaps.push_back(g(t));
  const std::size_t n = snaps.front().size();
  detail::require(m <= n, "build_source_approx: m exceeds the vector length");
  DenseMatrix s(n, n_s);
  src.snapshot_norms.resize(n_s);
  for (std::size_t i = 0; i < n_s; ++i) {
    detail::require(snaps[i].size() == n, "build_source_approx: inconsistent snapshot length");
    s.set_column(i, snaps[i]);
    src.snapshot_norms[i] = norm2(snaps[i]);
  }

  // A wide snapshot matrix is handled through its transpose.
  const bool wide = n < n_s;
  const SvdResult svd = wide ? thin_svd(transpose(s)) : thin_svd(s, m);
  src.singular_values = svd.singular_values;
  src.basis.reserve(m);
  for (std::size_t r = 0; r < m; ++r)
    src.basis.push_back(wide ? svd.right.column(r) : svd.left.column(r));
  src.coeffs = DenseMatrix(m, n_s);
  for (std::size_t i = 0; i < n_s; ++i)
    for (std::size_t r = 0; r < m; ++r) src.coeffs(r, i) = dot(src.basis[r], snaps[i]);
  if (interp == Interpolation::CubicHermite)
    src.slopes = estimate_slopes(src.coeffs, src.spacing());
  return src;
}

ApproxError approximation_error(const SourceApprox& src, const SourceFunction& g,
                                std::span<const double> offset, std::size_t refine) {
  detail::require(refine >= 1, "approximation_error: refine must be >= 1");
  const std::size_t points = refine * (src.times.size() - 1) + 1;
  const double horizon = src.horizon();
  ApproxError e;
  double num = 0.0, den = 0.0, prev_err = 0.0, prev_norm = 0.0;
  const double dt = horizon / static_cast<double>(points - 1);
  for (std::size_t k = 0; k < points; ++k) {
    const double t = k + 1 == points ? horizon : dt * static_cast<double>(k);
    const Vector gt = g(t);
    Vector diff = src.evaluate(t);
    for (std::size_t i = 0; i < diff.size(); ++i)
      diff[i] = gt[i] - (offset.empty() ? 0.0 : offset[i]) - diff[i];
    const double err = norm2(diff);
    const double gn = norm2(gt);
    e.max_error = std::max(e.max_error, err);
    if (k > 0) {
      num += 0.5 * dt * (err + prev_err);
      den += 0.5 * dt * (gn + prev_norm);
    }
    prev_err = err;
    prev_norm = gn;
  }
  e.relative_integral_error = den > 0.0 ? num / den : 0.0;
  return e;
}

}  // namespace expint
