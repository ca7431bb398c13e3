#pragma once

#include <functional>
#include <iosfwd>
#include <utility>

#include "expint/csr.hpp"
#include "expint/mesh.hpp"

namespace expint {

struct Wind {
  double v1 = 0.0;
  double v2 = 0.0;
};

/// Recirculating wind (y(1-x^2), x(y^2-1)).
Wind wind_field(double x, double y);

/// Dirichlet data: 5 on the left, right and bottom walls, 5 + 5exp(-50x^2)
/// on the top wall.
double default_boundary_value(double x, double y);

enum class MassScaling {
  None,    // A = K, the assembled stiffness matrix
  Lumped,  // A = M_L^{-1} K, sources scaled the same way
};

struct AssemblyOptions {
  double nu = 1.0 / 6400.0;
  bool supg = true;
  /// Multiplies wind_field; 0 gives pure diffusion.
  double wind_scale = 1.0;
  MassScaling mass = MassScaling::None;
  /// Overrides default_boundary_value when set.
  std::function<double(double, double)> boundary_value;
};

/// Semi-discrete operator for y' = -A y + g on the interior unknowns. With
/// MassScaling::Lumped, A and all sources carry the inverse row-sum lumped
/// mass; g_peak never does (it holds nodal values).
struct DiscreteOperator {
  CsrMatrix a;
  CsrMatrix a_diff;           // diffusion only, same elimination and scaling
  CsrMatrix stiffness;        // K restricted to interior rows/cols, unscaled
  Vector lumped_mass;         // interior nodes
  Vector g_bc;                // -K_IB u_B, mass-scaled like A
  Vector g_peak;              // exp(-10x^2 - 50y^2) at interior nodes
  StretchedMesh mesh;
  double nu = 0.0;
  double wind_scale = 1.0;
  bool supg = true;
  MassScaling mass = MassScaling::None;
  double max_elem_peclet = 0.0;

  std::size_t size() const noexcept { return a.rows(); }
};

/// Q1 elements, 2x2 Gauss quadrature, optional SUPG streamline term with
/// delta_e = h_e/(2|v|) (coth Pe_e - 1/Pe_e) from the element-center wind.
DiscreteOperator assemble_operator(const StretchedMesh& mesh, const AssemblyOptions& options);
DiscreteOperator assemble_operator(const StretchedMesh& mesh, double nu, bool with_supg);

/// Element length along the wind direction: min(hx/|cos a|, hy/|sin a|), a
/// vanishing velocity component dropping its term. Zero wind gives 0.
double streamline_length(double hx, double hy, Wind w);

/// (1/(2 nu)) * streamline_length * |v|
double element_peclet(double hx, double hy, Wind w, double nu);

/// Maximum element Peclet number, wind sampled at element centers.
double peclet_report(const DiscreteOperator& op);
double peclet_report(const StretchedMesh& mesh, double nu, double wind_scale = 1.0);

struct BoundaryVectors {
  Vector g_bc_raw;  // all mesh nodes; boundary values on walls, 0 inside
  Vector g_peak;    // interior nodes
};
BoundaryVectors boundary_vectors(const StretchedMesh& mesh);

struct MeshDiagnostics {
  double min_h = 0.0;
  double max_h = 0.0;
  double ratio = 0.0;
  double max_elem_peclet = 0.0;
  double asymmetry = 0.0;            // of A
  double stiffness_asymmetry = 0.0;  // of K
  std::size_t unknowns = 0;
};
MeshDiagnostics mesh_diagnostics(const DiscreteOperator& op);
void write_diagnostics(std::ostream& out, const MeshDiagnostics& d);

}  // namespace expint
