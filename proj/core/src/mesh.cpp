#include "expint/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "expint/error.hpp"

namespace expint {
namespace {

double min_cell(const std::vector<double>& c) {
  double m = c[1] - c[0];
  for (std::size_t k = 1; k + 1 < c.size(); ++k) m = std::min(m, c[k + 1] - c[k]);
  return m;
}

double max_cell(const std::vector<double>& c) {
  double m = c[1] - c[0];
  for (std::size_t k = 1; k + 1 < c.size(); ++k) m = std::max(m, c[k + 1] - c[k]);
  return m;
}

std::vector<double> graded_coordinates(std::size_t n, double stretch_ratio) {
  const std::size_t half = n / 2;
  const double growth = std::pow(stretch_ratio, 1.0 / static_cast<double>(half - 1));
  std::vector<double> widths(half);
  double total = 0.0;
  for (std::size_t k = 0; k < half; ++k) {
    widths[k] = std::pow(growth, static_cast<double>(k));
    total += widths[k];
  }
  std::vector<double> c(n + 1);
  c[0] = -1.0;
  for (std::size_t k = 0; k < half; ++k) c[k + 1] = c[k] + widths[k] / total;
  c[half] = 0.0;
  for (std::size_t k = 0; k < half; ++k) c[n - k] = -c[k];
  return c;
}

constexpr double kMinSpacing256 = 5.9804e-4;
constexpr double kMinSpacing512 = 2.0102e-4;

}  // namespace

double StretchedMesh::min_spacing() const { return std::min(min_cell(x), min_cell(y)); }
double StretchedMesh::max_spacing() const { return std::max(max_cell(x), max_cell(y)); }

StretchedMesh build_stretched_grid(std::size_t n, double stretch_ratio) {
  detail::require(n >= 4, "build_stretched_grid: need at least 4 cells per side");
  detail::require(n % 2 == 0, "build_stretched_grid: cell count must be even");
  detail::require(stretch_ratio >= 1.0, "build_stretched_grid: stretch_ratio must be >= 1");
  StretchedMesh mesh;
  mesh.nx = n;
  mesh.ny = n;
  mesh.x = graded_coordinates(n, stretch_ratio);
  mesh.y = mesh.x;
  return mesh;
}

double calibrate_stretch_ratio(std::size_t n, double target_min_h) {
  detail::require(n >= 4 && n % 2 == 0, "calibrate_stretch_ratio: n must be even and >= 4");
  const double uniform_h = 2.0 / static_cast<double>(n);
  detail::require(target_min_h > 0.0 && target_min_h <= uniform_h,
                  "calibrate_stretch_ratio: target must lie in (0, 2/n]");
  // min h decreases monotonically as the ratio grows.
  auto min_h = [n](double ratio) { return min_cell(graded_coordinates(n, ratio)); };
  double lo = 1.0, hi = 2.0;
  while (min_h(hi) > target_min_h) hi *= 2.0;
  for (int it = 0; it < 200 && hi - lo > 1e-13 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (min_h(mid) > target_min_h ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double preset_stretch_ratio(std::size_t n) {
  if (n == 256) return calibrate_stretch_ratio(256, kMinSpacing256);
  if (n == 512) return calibrate_stretch_ratio(512, kMinSpacing512);
  detail::require(n >= 4 && n % 2 == 0, "preset_stretch_ratio: n must be even and >= 4");
  const double g256 = std::pow(calibrate_stretch_ratio(256, kMinSpacing256), 1.0 / 127.0) - 1.0;
  const double g512 = std::pow(calibrate_stretch_ratio(512, kMinSpacing512), 1.0 / 255.0) - 1.0;
  const double exponent = std::log(g512 / g256) / std::log(2.0);
  const double growth = 1.0 + g256 * std::pow(static_cast<double>(n) / 256.0, exponent);
  return std::pow(growth, static_cast<double>(n / 2 - 1));
}

void write_mesh_coordinates(std::ostream& out, const StretchedMesh& mesh) {
  char buf[32];
  out << 'x';
  for (double v : mesh.x) {
    std::snprintf(buf, sizeof buf, " %.17g", v);
    out << buf;
  }
  out << "\ny";
  for (double v : mesh.y) {
    std::snprintf(buf, sizeof buf, " %.17g", v);
    out << buf;
  }
  out << '\n';
}

}  // namespace expint
