#include "expint/svd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace expint {

namespace {

struct Householder {
  std::size_t rows = 0;
  std::vector<Vector> reflectors;  // reflector k acts on rows k..rows-1
  DenseMatrix r;
};

Householder householder_factor(const DenseMatrix& a) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  std::vector<Vector> cols(n, Vector(m));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) cols[j][i] = a(i, j);

  Householder h{m, {}, DenseMatrix(n, n)};
  h.reflectors.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    Vector& x = cols[k];
    const double alpha_norm = norm2(std::span<const double>(x).subspan(k));
    Vector v(x.begin() + static_cast<std::ptrdiff_t>(k), x.end());
    const double alpha = x[k] >= 0.0 ? -alpha_norm : alpha_norm;
    v[0] -= alpha;
    const double vnorm = norm2(v);
    if (vnorm > 0.0) {
      scale(1.0 / vnorm, v);
      for (std::size_t j = k; j < n; ++j) {
        double* c = cols[j].data() + k;
        double d = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) d += v[i] * c[i];
        d *= 2.0;
        for (std::size_t i = 0; i < v.size(); ++i) c[i] -= d * v[i];
      }
    }
    h.reflectors.push_back(std::move(v));
    for (std::size_t i = 0; i <= k; ++i) h.r(i, k) = cols[k][i];
  }
  return h;
}

// Q times the first p columns of a small n x n matrix, padded with zeros.
DenseMatrix apply_q(const Householder& h, const DenseMatrix& small, std::size_t p) {
  const std::size_t m = h.rows;
  const std::size_t n = h.reflectors.size();
  DenseMatrix out(m, p);
  Vector e(m);
  for (std::size_t j = 0; j < p; ++j) {
    std::fill(e.begin(), e.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) e[i] = small(i, j);
    for (std::size_t k = n; k-- > 0;) {
      const Vector& v = h.reflectors[k];
      double* c = e.data() + k;
      double d = 0.0;
      for (std::size_t i = 0; i < v.size(); ++i) d += v[i] * c[i];
      if (d == 0.0) continue;
      d *= 2.0;
      for (std::size_t i = 0; i < v.size(); ++i) c[i] -= d * v[i];
    }
    out.set_column(j, e);
  }
  return out;
}

}  // namespace

QrResult householder_qr(const DenseMatrix& a) {
  detail::require(a.rows() >= a.cols(), "householder_qr: matrix must be tall");
  Householder h = householder_factor(a);
  const std::size_t n = a.cols();
  DenseMatrix q = apply_q(h, DenseMatrix::identity(n), n);
  return {std::move(q), std::move(h.r)};
}

namespace {

double fast_dot(const Vector& x, const Vector& y) {
  double d0 = 0.0, d1 = 0.0, d2 = 0.0, d3 = 0.0;
  std::size_t i = 0;
  for (; i + 4 <= x.size(); i += 4) {
    d0 += x[i] * y[i];
    d1 += x[i + 1] * y[i + 1];
    d2 += x[i + 2] * y[i + 2];
    d3 += x[i + 3] * y[i + 3];
  }
  for (; i < x.size(); ++i) d0 += x[i] * y[i];
  return (d0 + d1) + (d2 + d3);
}

// One-sided Jacobi on a small square matrix: returns W = R V with mutually
// orthogonal columns and the accumulated rotation V. Pairs of columns that
// are both below roundoff of the whole matrix are left alone.
void one_sided_jacobi(std::vector<Vector>& w, std::vector<Vector>& v) {
  const std::size_t n = w.size();
  const double eps = std::numeric_limits<double>::epsilon();
  Vector sq(n);
  double frob = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    sq[j] = fast_dot(w[j], w[j]);
    frob += sq[j];
  }
  const double negligible = eps * eps * frob;
  for (int sweep = 0; sweep < 80; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double alpha = sq[p];
        const double beta = sq[q];
        if (std::max(alpha, beta) <= negligible) continue;
        const double gamma = fast_dot(w[p], w[q]);
        if (gamma == 0.0 || std::abs(gamma) <= eps * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t i = 0; i < w[p].size(); ++i) {
          const double wp = w[p][i], wq = w[q][i];
          w[p][i] = c * wp - s * wq;
          w[q][i] = s * wp + c * wq;
        }
        for (std::size_t i = 0; i < n; ++i) {
          const double vp = v[p][i], vq = v[q][i];
          v[p][i] = c * vp - s * vq;
          v[q][i] = s * vp + c * vq;
        }
        sq[p] = fast_dot(w[p], w[p]);
        sq[q] = fast_dot(w[q], w[q]);
      }
    }
    if (!rotated) break;
  }
}

}  // namespace

SvdResult thin_svd(const DenseMatrix& s) { return thin_svd(s, s.cols()); }

SvdResult thin_svd(const DenseMatrix& s, std::size_t left_columns) {
  const std::size_t m = s.rows();
  const std::size_t n = s.cols();
  detail::require(m >= n, "thin_svd: matrix must be tall (rows >= cols)");
  detail::require(left_columns <= n, "thin_svd: too many left columns requested");
  if (n == 0) return {DenseMatrix(m, 0), {}, DenseMatrix(0, 0)};

  const Householder h = householder_factor(s);
  const DenseMatrix& r = h.r;

  std::vector<Vector> w(n, Vector(n)), v(n, Vector(n, 0.0));
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) w[j][i] = r(i, j);
    v[j][j] = 1.0;
  }
  one_sided_jacobi(w, v);

  Vector sigma(n);
  for (std::size_t j = 0; j < n; ++j) sigma[j] = norm2(w[j]);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return sigma[a] > sigma[b]; });

  SvdResult out;
  out.singular_values.resize(n);
  out.right = DenseMatrix(n, n);
  const double cutoff = sigma[order[0]] * n * std::numeric_limits<double>::epsilon();
  std::vector<Vector> left(n);
  std::vector<Vector> basis;  // orthonormal left vectors found so far
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t j = order[k];
    out.singular_values[k] = sigma[j];
    out.right.set_column(k, v[j]);
    if (sigma[j] > cutoff && sigma[j] > 0.0) {
      left[k] = scaled(1.0 / sigma[j], w[j]);
      basis.push_back(left[k]);
    }
  }
  // Complete the left factor where sigma vanished: orthogonalize unit vectors.
  std::size_t next_unit = 0;
  for (std::size_t k = 0; k < n; ++k) {
    if (!left[k].empty()) continue;
    while (true) {
      detail::require(next_unit < n, "thin_svd: failed to complete the left factor");
      Vector cand(n, 0.0);
      cand[next_unit++] = 1.0;
      for (int pass = 0; pass < 2; ++pass)
        for (const Vector& b : basis) axpy(-dot(b, cand), b, cand);
      const double nn = norm2(cand);
      if (nn > 0.5) {
        scale(1.0 / nn, cand);
        left[k] = cand;
        basis.push_back(std::move(cand));
        break;
      }
    }
  }
  DenseMatrix small_left(n, n);
  for (std::size_t k = 0; k < n; ++k) small_left.set_column(k, left[k]);
  out.left = apply_q(h, small_left, left_columns);
  return out;
}

}  // namespace expint
