#include "expint/expm.hpp"

#include <array>
#include <cmath>

namespace expint {
namespace {

constexpr double kTheta13 = 5.371920351148152;

constexpr std::array<double, 14> kPade13 = {
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
    129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
    1323241920.0,        40840800.0,          960960.0,           16380.0,
    182.0,               1.0};

// c0*I + c1*X + c2*Y + c3*Z
DenseMatrix combine(double c0, double c1, const DenseMatrix& x, double c2, const DenseMatrix& y,
                    double c3, const DenseMatrix& z) {
  const std::size_t n = x.rows();
  DenseMatrix r(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) r(i, j) = c1 * x(i, j) + c2 * y(i, j) + c3 * z(i, j);
    r(i, i) += c0;
  }
  return r;
}

}  // namespace

DenseMatrix expm_dense(const DenseMatrix& h, std::size_t dimension_cap) {
  detail::require(h.square(), "expm_dense: matrix must be square");
  detail::require(h.rows() <= dimension_cap, "expm_dense: dimension exceeds small-matrix cap");
  const std::size_t n = h.rows();
  if (n == 0) return {};

  const double norm = norm1(h);
  int s = 0;
  if (norm > kTheta13) s = static_cast<int>(std::ceil(std::log2(norm / kTheta13)));
  const DenseMatrix a = std::ldexp(1.0, -s) * h;

  const auto& b = kPade13;
  const DenseMatrix a2 = a * a;
  const DenseMatrix a4 = a2 * a2;
  const DenseMatrix a6 = a4 * a2;

  const DenseMatrix u_inner = a6 * combine(0.0, b[13], a6, b[11], a4, b[9], a2);
  const DenseMatrix u = a * (u_inner + combine(b[1], b[7], a6, b[5], a4, b[3], a2));
  const DenseMatrix v_inner = a6 * combine(0.0, b[12], a6, b[10], a4, b[8], a2);
  const DenseMatrix v = v_inner + combine(b[0], b[6], a6, b[4], a4, b[2], a2);

  DenseLu lu(v - u);
  if (lu.singular()) throw SolverError("expm_dense: singular Pade denominator", 0.0);
  DenseMatrix r = lu.solve(v + u);
  for (int k = 0; k < s; ++k) r = r * r;
  return r;
}

double phi_scalar(double z) {
  if (z == 0.0) return 1.0;
  if (std::abs(z) < 1e-2) {
    // sum_{k=0..7} z^k/(k+1)!, Horner form
    double acc = 1.0 / 40320.0;
    for (int k = 7; k >= 1; --k) {
      double fact = 1.0;
      for (int j = 2; j <= k; ++j) fact *= j;
      acc = acc * z + 1.0 / fact;
    }
    return acc;
  }
  return std::expm1(z) / z;
}

Vector phi_combination(const DenseMatrix& b, const std::vector<Vector>& w) {
  detail::require(b.square(), "phi_combination: matrix must be square");
  const std::size_t n = b.rows();
  const std::size_t p = w.size();
  detail::require(p >= 1, "phi_combination: need at least one vector");
  for (const auto& wj : w) detail::require(wj.size() == n, "phi_combination: length mismatch");

  DenseMatrix aug(n + p, n + p);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = b(i, j);
  // Column n+l holds w_{p-l}; the nilpotent shift sits on the superdiagonal.
  for (std::size_t l = 0; l < p; ++l)
    for (std::size_t i = 0; i < n; ++i) aug(i, n + l) = w[p - 1 - l][i];
  for (std::size_t l = 0; l + 1 < p; ++l) aug(n + l, n + l + 1) = 1.0;

  const DenseMatrix e = expm_dense(aug);
  Vector out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = e(i, n + p - 1);
  return out;
}

Vector phi_action_dense(const DenseMatrix& h, std::span<const double> b, double t) {
  detail::require(h.square(), "phi_action_dense: matrix must be square");
  detail::require(b.size() == h.rows(), "phi_action_dense: dimension mismatch");
  const std::size_t n = h.rows();
  if (t == 0.0) return Vector(n, 0.0);
  DenseMatrix aug(n + 1, n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = -t * h(i, j);
    aug(i, n) = t * b[i];
  }
  const DenseMatrix e = expm_dense(aug);
  Vector out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = e(i, n);
  return out;
}

PhiBlocks phi_blocks(const DenseMatrix& b, const DenseMatrix& e, std::size_t p) {
  detail::require(b.square(), "phi_blocks: matrix must be square");
  detail::require(e.rows() == b.rows(), "phi_blocks: row mismatch");
  const std::size_t n = b.rows();
  const std::size_t m = e.cols();
  const std::size_t dim = n + p * m;
  DenseMatrix aug(dim, dim);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = b(i, j);
    for (std::size_t j = 0; j < m; ++j) aug(i, n + j) = e(i, j);
  }
  for (std::size_t l = 0; l + 1 < p; ++l)
    for (std::size_t j = 0; j < m; ++j) aug(n + l * m + j, n + (l + 1) * m + j) = 1.0;

  const DenseMatrix ex = expm_dense(aug);
  PhiBlocks out;
  out.exp = ex.block(0, 0, n, n);
  out.phi_times_e.reserve(p);
  for (std::size_t l = 0; l < p; ++l) out.phi_times_e.push_back(ex.block(0, n + l * m, n, m));
  return out;
}

}  // namespace expint
