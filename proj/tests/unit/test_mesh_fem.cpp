#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "expint/fem.hpp"
#include "expint/gmres.hpp"
#include "generators.hpp"

using namespace expint;
using namespace expint::testing;

namespace {

Vector steady(const DiscreteOperator& op) {
  GmresOptions opt;
  opt.tol = 1e-12;
  const Ilu0 ilu(op.a);
  return gmres_solve(op.a, op.g_bc, opt, &ilu).x;
}

}  // namespace

TEST_CASE("uniform grid when stretch ratio is 1") {
  const StretchedMesh m = build_stretched_grid(4, 1.0);
  REQUIRE(m.x.size() == 5);
  for (std::size_t k = 0; k < 4; ++k) {
    CHECK(m.x[k + 1] - m.x[k] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(m.y[k + 1] - m.y[k] == doctest::Approx(0.5).epsilon(1e-15));
  }
}

TEST_CASE("stretched grid ratio, symmetry and bounds") {
  const StretchedMesh m = build_stretched_grid(8, 2.0);
  CHECK(std::abs(m.max_spacing() / m.min_spacing() - 2.0) <= 1e-12);
  for (std::size_t n : {4u, 10u, 64u, 256u}) {
    const StretchedMesh g = build_stretched_grid(n, preset_stretch_ratio(n));
    CHECK(g.x.front() == -1.0);
    CHECK(g.x.back() == 1.0);
    for (std::size_t k = 0; k <= n; ++k) {
      CHECK(std::abs(g.x[k] + g.x[n - k]) <= 1e-13);
      if (k < n) CHECK(g.x[k + 1] > g.x[k]);
    }
    CHECK(g.x == g.y);
  }
  CHECK_THROWS_AS(build_stretched_grid(7, 2.0), ContractViolation);
  CHECK_THROWS_AS(build_stretched_grid(2, 1.0), ContractViolation);
  CHECK_THROWS_AS(build_stretched_grid(8, 0.5), ContractViolation);
}

TEST_CASE("256 and 512 presets reproduce the published spacings") {
  const StretchedMesh m256 = build_stretched_grid(256, preset_stretch_ratio(256));
  CHECK(m256.min_spacing() == doctest::Approx(5.9804e-4).epsilon(0.05));
  CHECK(m256.max_spacing() == doctest::Approx(0.0312).epsilon(0.05));
  CHECK(m256.max_spacing() / m256.min_spacing() == doctest::Approx(52.17).epsilon(0.05));
  const double r = calibrate_stretch_ratio(256, m256.min_spacing());
  CHECK(r == doctest::Approx(preset_stretch_ratio(256)).epsilon(1e-8));
}

TEST_CASE("wind field") {
  auto w = wind_field(0.0, 0.0);
  CHECK(w.v1 == 0.0);
  CHECK(w.v2 == 0.0);
  w = wind_field(1.0, 1.0);
  CHECK(w.v1 == 0.0);
  CHECK(w.v2 == 0.0);
  w = wind_field(0.5, 0.0);
  CHECK(w.v1 == 0.0);
  CHECK(w.v2 == -0.5);
}

TEST_CASE("element Peclet number") {
  CHECK(element_peclet(0.1, 0.1, {1.0, 0.0}, 0.05) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(element_peclet(0.1, 0.1, {0.0, 0.0}, 0.05) == 0.0);
  CHECK(streamline_length(0.1, 0.2, {0.0, -3.0}) == doctest::Approx(0.2));
  // diagonal wind on a square element: min(h/cos, h/sin) = h sqrt(2)
  CHECK(streamline_length(0.1, 0.1, {1.0, 1.0}) == doctest::Approx(0.1 * std::sqrt(2.0)));
  const StretchedMesh m = build_stretched_grid(16, 1.0);
  CHECK(peclet_report(m, 1e-3, 0.0) == 0.0);
  CHECK(peclet_report(m, 1e-3, 2.0) == doctest::Approx(2.0 * peclet_report(m, 1e-3, 1.0)));
}

TEST_CASE("boundary vectors") {
  const StretchedMesh m = build_stretched_grid(16, 3.0);
  const BoundaryVectors b = boundary_vectors(m);
  CHECK(b.g_bc_raw[m.node_index(8, 16)] == doctest::Approx(10.0));
  CHECK(b.g_bc_raw[m.node_index(3, 0)] == 5.0);
  CHECK(b.g_bc_raw[m.node_index(0, 7)] == 5.0);
  CHECK(b.g_bc_raw[m.node_index(16, 7)] == 5.0);
  CHECK(b.g_bc_raw[m.node_index(5, 5)] == 0.0);
  CHECK(b.g_peak[m.interior_index(8, 8)] == 1.0);
  CHECK(b.g_peak.size() == m.interior_count());
  CHECK(default_boundary_value(0.3, 1.0) == doctest::Approx(5.0 + 5.0 * std::exp(-50.0 * 0.09)));
}

TEST_CASE("pure diffusion operator is symmetric and equals A_diff") {
  AssemblyOptions opt;
  opt.nu = 1.0;
  opt.wind_scale = 0.0;
  opt.supg = false;
  const DiscreteOperator op = assemble_operator(build_stretched_grid(4, 1.0), opt);
  CHECK(op.size() == 9);
  CHECK(asymmetry_ratio(op.a) <= 1e-13);
  CHECK(max_abs_diff(op.a.to_dense(), op.a_diff.to_dense()) == 0.0);
}

TEST_CASE("A_diff is symmetric positive definite") {
  for (MassScaling mass : {MassScaling::None, MassScaling::Lumped}) {
    AssemblyOptions opt;
    opt.mass = mass;
    const DiscreteOperator op = assemble_operator(build_stretched_grid(16, 5.0), opt);
    const CsrMatrix& d = op.a_diff;
    if (mass == MassScaling::None) CHECK(asymmetry_ratio(d) <= 1e-12);
    for_all(100, 31, [&](Rng& rng, std::size_t) {
      const Vector x = random_vector(rng, d.rows());
      CHECK(dot(x, spmv(d, x)) > 0.0);
    });
  }
}

TEST_CASE("field of values of A lies in the right half plane") {
  for (std::size_t n : {16u, 64u}) {
    const DiscreteOperator op =
        assemble_operator(build_stretched_grid(n, preset_stretch_ratio(n)), AssemblyOptions{});
    for_all(100, 32 + n, [&](Rng& rng, std::size_t) {
      const Vector x = random_vector(rng, op.size());
      CHECK(dot(x, spmv(op.a, x)) / dot(x, x) > 0.0);
    });
  }
}

TEST_CASE("steady plume stays between the boundary values") {
  // 16 cells undershoot to 4.31 below the hot strip (crosswind layer); 32 is the coarsest clean mesh.
  const DiscreteOperator op = assemble_operator(build_stretched_grid(32, preset_stretch_ratio(32)),
                                                1.0 / 6400.0, true);
  const Vector u = steady(op);
  CHECK(*std::min_element(u.begin(), u.end()) >= 4.5);
  CHECK(*std::max_element(u.begin(), u.end()) <= 10.5);
  // hot values only in the upper half
  for (std::size_t j = 1; j < 16; ++j)
    for (std::size_t i = 1; i < 32; ++i) CHECK(u[op.mesh.interior_index(i, j)] < 7.5);
}

TEST_CASE("patch test: constant boundary data gives the constant solution") {
  AssemblyOptions opt;
  opt.nu = 0.3;
  opt.wind_scale = 0.0;
  opt.supg = false;
  opt.boundary_value = [](double, double) { return 3.25; };
  const DiscreteOperator op = assemble_operator(build_stretched_grid(12, 4.0), opt);
  for (double x : steady(op)) CHECK(std::abs(x - 3.25) <= 1e-8);
  // the wind and SUPG terms also annihilate constants
  opt.wind_scale = 1.0;
  opt.supg = true;
  const DiscreteOperator op2 = assemble_operator(build_stretched_grid(12, 4.0), opt);
  for (double x : steady(op2)) CHECK(std::abs(x - 3.25) <= 1e-8);
}

TEST_CASE("second order convergence for a manufactured solution") {
  // -nu lap u = f with u = sin(pi x) sin(pi y), zero boundary data.
  const double nu = 0.5;
  double prev = 0.0;
  for (std::size_t n : {8u, 16u, 32u}) {
    AssemblyOptions opt;
    opt.nu = nu;
    opt.wind_scale = 0.0;
    opt.supg = false;
    opt.boundary_value = [](double, double) { return 0.0; };
    const DiscreteOperator op = assemble_operator(build_stretched_grid(n, 1.0), opt);
    const StretchedMesh& m = op.mesh;
    Vector rhs(op.size()), exact(op.size());
    for (std::size_t j = 1; j < n; ++j)
      for (std::size_t i = 1; i < n; ++i) {
        const std::size_t k = m.interior_index(i, j);
        exact[k] = std::sin(std::numbers::pi * m.x[i]) * std::sin(std::numbers::pi * m.y[j]);
        rhs[k] = op.lumped_mass[k] * 2.0 * std::numbers::pi * std::numbers::pi * nu * exact[k];
      }
    GmresOptions gopt;
    gopt.tol = 1e-13;
    const Ilu0 ilu(op.a);
    const Vector u = gmres_solve(op.a, rhs, gopt, &ilu).x;
    double err = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k)
      err += op.lumped_mass[k] * (u[k] - exact[k]) * (u[k] - exact[k]);
    err = std::sqrt(err);
    if (prev > 0.0) CHECK(prev / err >= 3.5);
    prev = err;
  }
}

TEST_CASE("lumped mass scaling") {
  const StretchedMesh mesh = build_stretched_grid(10, 3.0);
  AssemblyOptions none;
  AssemblyOptions lumped;
  lumped.mass = MassScaling::Lumped;
  const DiscreteOperator k = assemble_operator(mesh, none);
  const DiscreteOperator a = assemble_operator(mesh, lumped);
  double total = 0.0;
  for (double m : k.lumped_mass) total += m;
  CHECK(total < 4.0);  // interior nodes only
  CHECK(total > 4.0 * 0.5);
  Vector inv(k.lumped_mass.size());
  for (std::size_t i = 0; i < inv.size(); ++i) inv[i] = 1.0 / k.lumped_mass[i];
  CHECK(max_abs_diff(a.a.to_dense(), scale_rows(k.a, inv).to_dense()) <= 1e-12 * norm1(a.a));
  for (std::size_t i = 0; i < inv.size(); ++i)
    CHECK(a.g_bc[i] == doctest::Approx(k.g_bc[i] * inv[i]).epsilon(1e-13));
  CHECK(a.g_peak == k.g_peak);
}

TEST_CASE("diagnostics and mesh export") {
  const DiscreteOperator op =
      assemble_operator(build_stretched_grid(8, 2.0), AssemblyOptions{});
  const MeshDiagnostics d = mesh_diagnostics(op);
  CHECK(d.unknowns == 49);
  CHECK(d.ratio == doctest::Approx(2.0));
  CHECK(d.max_elem_peclet == doctest::Approx(peclet_report(op)));
  std::ostringstream out;
  write_diagnostics(out, d);
  CHECK(out.str().find("unknowns=49\n") == 0);
  CHECK(out.str().find("max_elem_peclet=") != std::string::npos);
  std::ostringstream coords;
  write_mesh_coordinates(coords, op.mesh);
  std::istringstream in(coords.str());
  std::string tag;
  in >> tag;
  CHECK(tag == "x");
  double first = 0.0;
  in >> first;
  CHECK(first == -1.0);
}
