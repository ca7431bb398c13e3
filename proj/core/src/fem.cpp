#include "expint/fem.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

namespace expint {

Wind wind_field(double x, double y) { return {y * (1.0 - x * x), x * (y * y - 1.0)}; }

double default_boundary_value(double x, double y) {
  if (y >= 1.0) return 5.0 + 5.0 * std::exp(-50.0 * x * x);
  return 5.0;
}

double streamline_length(double hx, double hy, Wind w) {
  const double speed = std::hypot(w.v1, w.v2);
  if (speed == 0.0) return 0.0;
  double h = std::numeric_limits<double>::infinity();
  if (w.v1 != 0.0) h = std::min(h, hx * speed / std::abs(w.v1));
  if (w.v2 != 0.0) h = std::min(h, hy * speed / std::abs(w.v2));
  return h;
}

double element_peclet(double hx, double hy, Wind w, double nu) {
  return streamline_length(hx, hy, w) * std::hypot(w.v1, w.v2) / (2.0 * nu);
}

namespace {

Wind scaled_wind(double x, double y, double s) {
  const Wind w = wind_field(x, y);
  return {s * w.v1, s * w.v2};
}

// coth(p) - 1/p, series for small p
double langevin(double p) {
  if (p < 1e-3) return p / 3.0 - p * p * p / 45.0;
  if (p > 20.0) return 1.0 - 1.0 / p;
  return 1.0 / std::tanh(p) - 1.0 / p;
}

double supg_delta(double hx, double hy, Wind w, double nu) {
  const double speed = std::hypot(w.v1, w.v2);
  if (speed == 0.0) return 0.0;
  const double h = streamline_length(hx, hy, w);
  const double pe = speed * h / (2.0 * nu);
  return h / (2.0 * speed) * langevin(pe);
}

struct ElementMatrices {
  std::array<std::array<double, 4>, 4> full{};
  std::array<std::array<double, 4>, 4> diffusion{};
};

// Local node order: (x0,y0), (x1,y0), (x1,y1), (x0,y1).
constexpr std::array<double, 4> kXi = {-1.0, 1.0, 1.0, -1.0};
constexpr std::array<double, 4> kEta = {-1.0, -1.0, 1.0, 1.0};

ElementMatrices element_matrices(double x0, double x1, double y0, double y1,
                                 const AssemblyOptions& opt) {
  const double hx = x1 - x0, hy = y1 - y0;
  const double xc = 0.5 * (x0 + x1), yc = 0.5 * (y0 + y1);
  const double delta =
      opt.supg ? supg_delta(hx, hy, scaled_wind(xc, yc, opt.wind_scale), opt.nu) : 0.0;
  const double g = 1.0 / std::sqrt(3.0);
  const double jac = hx * hy / 4.0;
  ElementMatrices em;
  for (double qx : {-g, g}) {
    for (double qy : {-g, g}) {
      const double x = xc + 0.5 * hx * qx;
      const double y = yc + 0.5 * hy * qy;
      const Wind w = scaled_wind(x, y, opt.wind_scale);
      std::array<double, 4> phi{}, dx{}, dy{}, stream{};
      for (int a = 0; a < 4; ++a) {
        phi[a] = 0.25 * (1.0 + kXi[a] * qx) * (1.0 + kEta[a] * qy);
        dx[a] = 0.25 * kXi[a] * (1.0 + kEta[a] * qy) * (2.0 / hx);
        dy[a] = 0.25 * kEta[a] * (1.0 + kXi[a] * qx) * (2.0 / hy);
        stream[a] = w.v1 * dx[a] + w.v2 * dy[a];
      }
      for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) {
          const double diff = opt.nu * (dx[a] * dx[b] + dy[a] * dy[b]);
          const double conv = phi[a] * stream[b];
          const double supg = delta * stream[a] * stream[b];
          em.full[a][b] += jac * (diff + conv + supg);
          em.diffusion[a][b] += jac * diff;
        }
      }
    }
  }
  return em;
}

}  // namespace

BoundaryVectors boundary_vectors(const StretchedMesh& mesh) {
  BoundaryVectors bv;
  bv.g_bc_raw.assign(mesh.node_count(), 0.0);
  bv.g_peak.assign(mesh.interior_count(), 0.0);
  for (std::size_t j = 0; j <= mesh.ny; ++j) {
    for (std::size_t i = 0; i <= mesh.nx; ++i) {
      const double x = mesh.x[i], y = mesh.y[j];
      if (mesh.is_boundary(i, j))
        bv.g_bc_raw[mesh.node_index(i, j)] = default_boundary_value(x, y);
      else
        bv.g_peak[mesh.interior_index(i, j)] = std::exp(-10.0 * x * x - 50.0 * y * y);
    }
  }
  return bv;
}

DiscreteOperator assemble_operator(const StretchedMesh& mesh, const AssemblyOptions& options) {
  detail::require(options.nu > 0.0, "assemble_operator: nu must be positive");
  detail::require(mesh.nx >= 2 && mesh.ny >= 2, "assemble_operator: mesh too small");
  const std::size_t n = mesh.interior_count();

  Vector boundary(mesh.node_count(), 0.0);
  for (std::size_t j = 0; j <= mesh.ny; ++j)
    for (std::size_t i = 0; i <= mesh.nx; ++i)
      if (mesh.is_boundary(i, j))
        boundary[mesh.node_index(i, j)] = options.boundary_value
                                              ? options.boundary_value(mesh.x[i], mesh.y[j])
                                              : default_boundary_value(mesh.x[i], mesh.y[j]);

  std::vector<Triplet> k_full, k_diff;
  k_full.reserve(16 * mesh.nx * mesh.ny);
  k_diff.reserve(16 * mesh.nx * mesh.ny);
  Vector mass(n, 0.0);
  Vector lift(n, 0.0);  // -K_IB u_B

  for (std::size_t ej = 0; ej < mesh.ny; ++ej) {
    for (std::size_t ei = 0; ei < mesh.nx; ++ei) {
      const double x0 = mesh.x[ei], x1 = mesh.x[ei + 1];
      const double y0 = mesh.y[ej], y1 = mesh.y[ej + 1];
      const ElementMatrices em = element_matrices(x0, x1, y0, y1, options);
      const std::array<std::size_t, 4> ni = {ei, ei + 1, ei + 1, ei};
      const std::array<std::size_t, 4> nj = {ej, ej, ej + 1, ej + 1};
      const double quarter_area = 0.25 * (x1 - x0) * (y1 - y0);
      for (int a = 0; a < 4; ++a) {
        if (mesh.is_boundary(ni[a], nj[a])) continue;
        const auto row = static_cast<Index>(mesh.interior_index(ni[a], nj[a]));
        mass[row] += quarter_area;
        for (int b = 0; b < 4; ++b) {
          if (mesh.is_boundary(ni[b], nj[b])) {
            lift[row] -= em.full[a][b] * boundary[mesh.node_index(ni[b], nj[b])];
            continue;
          }
          const auto col = static_cast<Index>(mesh.interior_index(ni[b], nj[b]));
          k_full.push_back({row, col, em.full[a][b]});
          k_diff.push_back({row, col, em.diffusion[a][b]});
        }
      }
    }
  }

  DiscreteOperator op;
  op.mesh = mesh;
  op.nu = options.nu;
  op.wind_scale = options.wind_scale;
  op.supg = options.supg;
  op.mass = options.mass;
  op.stiffness = CsrMatrix::from_triplets(n, n, std::move(k_full));
  const CsrMatrix kd = CsrMatrix::from_triplets(n, n, std::move(k_diff));
  Vector inv_mass(n);
  for (std::size_t i = 0; i < n; ++i)
    inv_mass[i] = options.mass == MassScaling::Lumped ? 1.0 / mass[i] : 1.0;
  op.a = scale_rows(op.stiffness, inv_mass);
  op.a_diff = scale_rows(kd, inv_mass);
  op.lumped_mass = std::move(mass);
  op.g_bc.resize(n);
  for (std::size_t i = 0; i < n; ++i) op.g_bc[i] = lift[i] * inv_mass[i];
  op.g_peak = boundary_vectors(mesh).g_peak;
  op.max_elem_peclet = peclet_report(mesh, options.nu, options.wind_scale);
  return op;
}

DiscreteOperator assemble_operator(const StretchedMesh& mesh, double nu, bool with_supg) {
  AssemblyOptions opt;
  opt.nu = nu;
  opt.supg = with_supg;
  return assemble_operator(mesh, opt);
}

double peclet_report(const StretchedMesh& mesh, double nu, double wind_scale) {
  double best = 0.0;
  for (std::size_t ej = 0; ej < mesh.ny; ++ej) {
    for (std::size_t ei = 0; ei < mesh.nx; ++ei) {
      const double hx = mesh.x[ei + 1] - mesh.x[ei];
      const double hy = mesh.y[ej + 1] - mesh.y[ej];
      const Wind w = scaled_wind(0.5 * (mesh.x[ei] + mesh.x[ei + 1]),
                                 0.5 * (mesh.y[ej] + mesh.y[ej + 1]), wind_scale);
      best = std::max(best, element_peclet(hx, hy, w, nu));
    }
  }
  return best;
}

double peclet_report(const DiscreteOperator& op) {
  return peclet_report(op.mesh, op.nu, op.wind_scale);
}

MeshDiagnostics mesh_diagnostics(const DiscreteOperator& op) {
  MeshDiagnostics d;
  d.min_h = op.mesh.min_spacing();
  d.max_h = op.mesh.max_spacing();
  d.ratio = d.max_h / d.min_h;
  d.max_elem_peclet = op.max_elem_peclet;
  d.asymmetry = asymmetry_ratio(op.a);
  d.stiffness_asymmetry = asymmetry_ratio(op.stiffness);
  d.unknowns = op.size();
  return d;
}

void write_diagnostics(std::ostream& out, const MeshDiagnostics& d) {
  char buf[64];
  auto line = [&](const char* key, double v) {
    std::snprintf(buf, sizeof buf, "%s=%.6e\n", key, v);
    out << buf;
  };
  out << "unknowns=" << d.unknowns << '\n';
  line("min_h", d.min_h);
  line("max_h", d.max_h);
  line("ratio", d.ratio);
  line("max_elem_peclet", d.max_elem_peclet);
  line("asymmetry_ratio", d.asymmetry);
  line("stiffness_asymmetry_ratio", d.stiffness_asymmetry);
}

}  // namespace expint
