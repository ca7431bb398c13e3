#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

namespace expint {

/// Tensor-product grid on [-1,1]^2, graded toward all four walls.
struct StretchedMesh {
  std::size_t nx = 0;
  std::size_t ny = 0;
  std::vector<double> x;  // nx + 1 node coordinates, strictly increasing
  std::vector<double> y;  // ny + 1 node coordinates

  std::size_t node_count() const noexcept { return (nx + 1) * (ny + 1); }
  std::size_t node_index(std::size_t i, std::size_t j) const noexcept { return j * (nx + 1) + i; }
  bool is_boundary(std::size_t i, std::size_t j) const noexcept {
    return i == 0 || j == 0 || i == nx || j == ny;
  }

  /// Unknowns are the interior nodes, numbered x-fastest.
  std::size_t interior_count() const noexcept { return (nx - 1) * (ny - 1); }
  std::size_t interior_index(std::size_t i, std::size_t j) const noexcept {
    return (j - 1) * (nx - 1) + (i - 1);
  }

  double min_spacing() const;
  double max_spacing() const;
};

/// Cell widths grow geometrically from each wall to the center so that
/// max h / min h == stretch_ratio. n must be even and >= 4.
StretchedMesh build_stretched_grid(std::size_t n, double stretch_ratio);

/// Bisection for the stretch ratio that yields the requested smallest cell.
double calibrate_stretch_ratio(std::size_t n, double target_min_h);

/// Grading used for the benchmark meshes. 256 and 512 reproduce the published
/// stretched-mesh minimum spacings; other sizes follow a power-law fit of the
/// per-cell growth factor through those two meshes.
double preset_stretch_ratio(std::size_t n);

/// Two lines: "x <coords...>" and "y <coords...>".
void write_mesh_coordinates(std::ostream& out, const StretchedMesh& mesh);

}  // namespace expint
