// Acceptance run: one PASS/FAIL line per criterion. Criteria 1-10 always run;
// 11 (256x256) only with --full.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>
#include <vector>

#include "expint/arnoldi.hpp"
#include "expint/bench.hpp"
#include "expint/block_arnoldi.hpp"
#include "expint/phiv.hpp"
#include "expint/svd.hpp"
#include "generators.hpp"

using namespace expint;
using namespace expint::testing;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

std::string sci(double x) { return fmt("%.3e", x); }

bool in_range(double x, double lo, double hi) { return x >= lo && x <= hi; }

// ---- criterion 1

Outcome phi_engines() {
  double worst = 0.0;
  const double tol = 1e-8;
  const double bound = std::max(1e-7, 10.0 * tol);
  for_all(10, 1, [&](Rng& rng, std::size_t) {
    const std::size_t n = rng.index(8, 64);
    const CsrMatrix a = random_stable_csr(rng, n, 0.2);
    const Vector v = random_vector(rng, n), g = random_vector(rng, n);
    const double t = rng.uniform(0.1, 2.0);
    const Vector oracle = voc_oracle(a.to_dense(), v, g, t);
    for (auto* engine : {&phiv_rt, &phiv_expokit})
      worst = std::max(worst, rel_diff(engine(a, v, g, t, {.tol = tol}).y, oracle));
  });
  return {worst <= bound, "max relative deviation " + sci(worst) + " (bound " + sci(bound) + ")"};
}

// ---- criterion 2

double single_certificate(Rng& rng) {
  const std::size_t n = rng.index(30, 100);
  const CsrMatrix a = random_stable_csr(rng, n, 0.2);
  const Vector v = random_vector(rng, n), g = random_vector(rng, n);
  Vector start = g;
  axpy(-1.0, spmv(a, v), start);
  const std::size_t k = rng.index(3, 10);
  KrylovBasis b = start_krylov(start, k, norm1(a));
  while (b.k < k && arnoldi_extend(a, b)) {
  }
  const Vector u = galerkin_solution(b, Vector(b.k, 0.0), rng.uniform(0.05, 2.0));
  const double shortcut = exp_residual_norm(b, u);
  // -A y + g - y', y = v + V u, u' = -H u + beta e1
  const Vector y = krylov_reconstruct(b, v, u);
  Vector r = g;
  axpy(-1.0, spmv(a, y), r);
  Vector du(b.k, 0.0);
  du[0] = b.beta;
  axpy(-1.0, b.square() * std::span<const double>(u), du);
  for (std::size_t j = 0; j < b.k; ++j) axpy(-du[j], b.v[j], r);
  return std::abs(shortcut - norm2(r)) / norm2(r);
}

double block_certificate(Rng& rng) {
  const std::size_t n = rng.index(30, 100);
  const std::size_t m = rng.index(1, 3);
  const CsrMatrix a = random_stable_csr(rng, n, 0.1);
  std::vector<Vector> cols;
  for (std::size_t j = 0; j < m; ++j) {
    Vector x = random_vector(rng, n);
    for (int pass = 0; pass < 2; ++pass)
      for (const Vector& q : cols) axpy(-dot(q, x), q, x);
    scale(1.0 / norm2(x), x);
    cols.push_back(std::move(x));
  }
  BlockKrylovBasis b = start_block_krylov(cols, 4, norm1(a));
  const std::size_t blocks = rng.index(2, 4);
  for (std::size_t k = 0; k < blocks; ++k) block_arnoldi_extend(a, b);
  const std::size_t dim = b.dim();
  const DenseMatrix h = b.square();
  const Vector p = random_vector(rng, m);
  Vector e1p(dim, 0.0);
  std::copy(p.begin(), p.end(), e1p.begin());
  const Vector u = project_ivp_advance(h, Vector(dim, 0.0), e1p, e1p, rng.uniform(0.1, 2.0));
  const std::size_t c0 = b.offsets[b.blocks() - 1];
  const double shortcut = norm2(b.subdiagonal() * std::span<const double>(u.data() + c0, dim - c0));
  // -A V u + U p - V (-H u + E1 p)
  Vector y(n, 0.0);
  for (std::size_t c = 0; c < dim; ++c) axpy(u[c], b.v[c], y);
  Vector r = scaled(-1.0, spmv(a, y));
  for (std::size_t c = 0; c < m; ++c) axpy(p[c], cols[c], r);
  Vector du = e1p;
  axpy(-1.0, h * std::span<const double>(u), du);
  for (std::size_t c = 0; c < dim; ++c) axpy(-du[c], b.v[c], r);
  return std::abs(shortcut - norm2(r)) / norm2(r);
}

Outcome certificates() {
  double single = 0.0, block = 0.0;
  for_all(10, 2, [&](Rng& rng, std::size_t) { single = std::max(single, single_certificate(rng)); });
  for_all(10, 3, [&](Rng& rng, std::size_t) { block = std::max(block, block_certificate(rng)); });
  return {single <= 1e-8 && block <= 1e-8,
          "single " + sci(single) + ", block " + sci(block) + " (bound 1e-08)"};
}

// ---- criterion 3

Outcome exactness() {
  Rng rng(4);
  const std::size_t n = 40;
  const CsrMatrix a = random_stable_csr(rng, n, 0.2);
  const Vector v = random_vector(rng, n), g = random_vector(rng, n);
  const double horizon = 2.0, tol = 1e-8;
  const Vector exact = voc_oracle(a.to_dense(), v, g, horizon);
  const SourceFunction src = [&](double) { return g; };
  double worst = 0.0;
  for (PhiEngine e : {PhiEngine::ResidualTime, PhiEngine::Expokit})
    for (double dt : {2.0, 1.0, 0.5, 0.25, 0.1}) {
      const RunReport r =
          exp_euler_solve(a, v, src, TimeGrid::uniform(0.0, horizon, dt), {e, tol, 0});
      worst = std::max(worst, rel_diff(r.y_final, exact));
    }
  return {worst <= 10.0 * tol, "max relative error " + sci(worst) + " over dt in {2,1,0.5,0.25,0.1}"};
}

// ---- Test 1 runs shared by criteria 4, 5, 8, 9

struct Test1Runs {
  std::vector<BenchRow> rt, expokit, ros2, ros2_diff, ros2_diff_large;
  BenchRow ebk_1e4;
};

Test1Runs run_test1(const TestProblem& p) {
  const BenchOptions opt;
  Test1Runs r;
  for (double dt : {20.0, 10.0, 5.0}) {
    r.rt.push_back(run_case(p, {Method::Ee2Rt, dt, 1e-4, 0, 0}, opt));
    r.expokit.push_back(run_case(p, {Method::Ee2Expokit, dt, 1e-4, 0, 0}, opt));
    r.ros2.push_back(run_case(p, {Method::Ros2, dt, 0.0, 0, 0}, opt));
  }
  for (double dt : {2.0, 1.0, 0.5}) r.ros2_diff.push_back(run_case(p, {Method::Ros2Diff, dt, 0.0, 0, 0}, opt));
  r.ros2_diff_large.push_back(run_case(p, {Method::Ros2Diff, 20.0, 0.0, 0, 0}, opt));
  r.ebk_1e4 = run_case(p, {Method::Ebk, 0.0, 1e-4, 120, 2}, opt);
  return r;
}

bool ratios_ok(const std::vector<BenchRow>& rows, std::string& text) {
  bool ok = true;
  for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
    const double q = rows[i].error / rows[i + 1].error;
    ok = ok && in_range(q, 3.2, 4.8);
    text += (i ? "/" : "") + fmt("%.2f", q);
  }
  return ok;
}

Outcome order(const Test1Runs& r) {
  std::string t = "EE2/RT ratios ";
  const bool ee2 = ratios_ok(r.rt, t);
  t += ", ROS2 ratios ";
  const bool ros = ratios_ok(r.ros2, t);
  return {ee2 && ros, t + " (window [3.2, 4.8])"};
}

Outcome engines_agree(const Test1Runs& r) {
  double worst = 0.0;
  for (std::size_t i = 0; i < r.rt.size(); ++i) {
    const double a = r.rt[i].error, b = r.expokit[i].error;
    worst = std::max(worst, std::abs(a - b) / std::max(a, b));
  }
  const double ratio =
      static_cast<double>(r.expokit.back().fevals) / static_cast<double>(r.rt.back().fevals);
  return {worst <= 5e-3 && ratio >= 2.0,
          "max error disagreement " + sci(worst) + " (bound 5e-03), matvec ratio at dt=5 " +
              fmt("%.2f", ratio) + " (" + std::to_string(r.expokit.back().fevals) + " vs " +
              std::to_string(r.rt.back().fevals) + ", need >= 2)"};
}

Outcome rank_structure(const TestProblem& p) {
  const std::size_t n_s = 120;
  DenseMatrix s(p.op.size(), n_s);
  for (std::size_t j = 0; j < n_s; ++j) {
    const Vector g = p.g(p.horizon * static_cast<double>(j) / static_cast<double>(n_s - 1));
    for (std::size_t i = 0; i < g.size(); ++i) s(i, j) = g[i];
  }
  const SvdResult svd = thin_svd(s);
  const double q = svd.singular_values[2] / svd.singular_values[0];
  return {q <= 1e-10, "sigma_3/sigma_1 = " + sci(q) + " (bound 1e-10)"};
}

Outcome source_floor(const TestProblem& p) {
  const std::vector<std::size_t> ns{30, 60, 120};
  const auto rows = source_study(p, ns, 2, 1e-6, Interpolation::Linear);
  bool ok = true;
  std::string t = "piecewise-linear p(t); EBK/integral error";
  for (const auto& row : rows) {
    const double q = row.ebk_error / row.integral_error;
    ok = ok && in_range(q, 0.1, 10.0);
    t += " " + fmt("%.2f", q);
  }
  t += " (within 10x), max-error decay";
  for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
    const double d = rows[i].max_error / rows[i + 1].max_error;
    ok = ok && d >= 3.5;
    t += " " + fmt("%.2f", d);
  }
  return {ok, t + " (need >= 3.5)"};
}

Outcome work_ordering(const Test1Runs& r) {
  const BenchRow& ebk = r.ebk_1e4;
  const BenchRow& rt = r.rt.back();
  const BenchRow& ex = r.expokit.back();
  const bool matched = ebk.error <= 2e-4 && rt.error <= 2e-4 && ex.error <= 2e-4;
  const bool ordered = ebk.fevals < rt.fevals && rt.fevals < ex.fevals;
  return {matched && ordered, "matvecs EBK " + std::to_string(ebk.fevals) + " < EE2/RT " +
                                  std::to_string(rt.fevals) + " < EE2/EXPOKIT " +
                                  std::to_string(ex.fevals) + ", errors " + sci(ebk.error) + ", " +
                                  sci(rt.error) + ", " + sci(ex.error) + " (need <= 2e-04)"};
}

Outcome diffusion_stage(const Test1Runs& r) {
  const double large = r.ros2_diff_large.front().error;
  const bool unstable = !std::isfinite(large) || large > 0.1;
  std::string t = "dt=20 error " + sci(large) + " (need > 1e-01 or non-finite), dt 2/1/0.5 ratios ";
  const bool converges = ratios_ok(r.ros2_diff, t);
  return {unstable && converges, t + " (window [3.2, 4.8])"};
}

Outcome test2() {
  ProblemSpec spec;
  spec.test = 2;
  const TestProblem p = build_problem(spec);
  const BenchRow ebk = run_case(p, {Method::Ebk, 0.0, 1e-6, 80, 2}, {});
  const BenchRow rt = run_case(p, {Method::Ee2Rt, 10.0, 1e-6, 0, 0}, {});
  const double ratio = static_cast<double>(rt.fevals) / static_cast<double>(ebk.fevals);
  return {ebk.error <= 1e-5 && ratio >= 5.0 && ebk.error < rt.error,
          "EBK error " + sci(ebk.error) + " (need <= 1e-05) with " + std::to_string(ebk.fevals) +
              " matvecs, EE2/RT dt=10 error " + sci(rt.error) + " with " +
              std::to_string(rt.fevals) + " matvecs, ratio " + fmt("%.1f", ratio) + " (need >= 5)"};
}

// ---- criterion 11

bool within(double x, double target, double factor) {
  return std::isfinite(x) && x <= target * factor && x >= target / factor;
}

Outcome full_scale() {
  ProblemSpec spec;
  spec.mesh = 256;
  const TestProblem p = build_problem(spec);
  const MeshDiagnostics d = mesh_diagnostics(p.op);
  bool ok = true;
  std::string t;
  auto near = [&](const char* name, double x, double target, double rel) {
    const bool pass = std::abs(x - target) <= rel * target;
    ok = ok && pass;
    t += std::string(name) + " " + fmt("%.4g", x) + (pass ? "" : "!") + ", ";
  };
  near("min h", d.min_h, 5.9804e-4, 0.05);
  near("max h", d.max_h, 0.0312, 0.05);
  near("ratio", d.ratio, 52.17, 0.05);
  near("Peclet", d.max_elem_peclet, 1.9989e2, 0.25);
  const bool asym = within(d.asymmetry, 0.022, 2.0);
  ok = ok && asym;
  t += "asymmetry " + fmt("%.3g", d.asymmetry) + (asym ? "" : "!") + "; errors";

  auto check = [&](const BenchCase& c, double target) {
    const BenchRow row = run_case(p, c, {});
    const bool pass = within(row.error, target, 5.0);
    ok = ok && pass;
    t += " " + sci(row.error) + (pass ? "" : "!");
  };
  const auto study = source_study(p, std::vector<std::size_t>{30, 60, 120}, 2, 1e-6);
  const double table2[] = {2.24e-5, 1.23e-6, 7.90e-8};
  for (std::size_t i = 0; i < 3; ++i) {
    const bool pass = within(study[i].ebk_error, table2[i], 5.0);
    ok = ok && pass;
    t += " " + sci(study[i].ebk_error) + (pass ? "" : "!");
  }
  check({Method::Ebk, 0.0, 1e-6, 120, 2}, 7.90e-8);
  const double ee2[] = {1.51e-3, 3.79e-4, 9.50e-5};
  const double ros2[] = {3.03e-3, 7.60e-4, 1.91e-4};
  const double dts[] = {20.0, 10.0, 5.0};
  for (std::size_t i = 0; i < 3; ++i) check({Method::Ee2Rt, dts[i], 1e-4, 0, 0}, ee2[i]);
  for (std::size_t i = 0; i < 3; ++i) check({Method::Ros2, dts[i], 0.0, 0, 0}, ros2[i]);
  return {ok, t + " (! marks a miss)"};
}

template <class F>
bool criterion(int id, const char* title, F&& run) {
  Outcome o;
  try {
    o = run();
  } catch (const std::exception& e) {
    o = {false, std::string("threw: ") + e.what()};
  }
  std::printf("criterion %2d %s: %s: %s\n", id, o.pass ? "PASS" : "FAIL", title, o.detail.c_str());
  std::fflush(stdout);
  return o.pass;
}

}  // namespace

int main(int argc, char** argv) {
  bool full = false;
  for (int i = 1; i < argc; ++i)
    if (std::strcmp(argv[i], "--full") == 0) full = true;
  if (const char* env = std::getenv("EXPINT_ACCEPTANCE_FULL"); env && *env && *env != '0')
    full = true;

  bool ok = true;
  ok &= criterion(1, "phi engines vs dense oracle", phi_engines);
  ok &= criterion(2, "residual certificates", certificates);
  ok &= criterion(3, "exponential Euler exact for constant g", exactness);

  TestProblem t1;
  Test1Runs runs;
  std::string setup_error;
  try {
    t1 = build_problem(ProblemSpec{});
    runs = run_test1(t1);
  } catch (const std::exception& e) {
    setup_error = e.what();
  }
  auto need_setup = [&](auto f) {
    return [&, f]() -> Outcome {
      if (!setup_error.empty()) return {false, "Test 1 setup failed: " + setup_error};
      return f();
    };
  };
  ok &= criterion(4, "order on Test 1 (64x64)", need_setup([&] { return order(runs); }));
  ok &= criterion(5, "EE2/RT vs EE2/EXPOKIT", need_setup([&] { return engines_agree(runs); }));
  ok &= criterion(6, "Test 1 source rank", need_setup([&] { return rank_structure(t1); }));
  ok &= criterion(7, "EBK error tracks the source model", need_setup([&] { return source_floor(t1); }));
  ok &= criterion(8, "work ordering at ~1e-4", need_setup([&] { return work_ordering(runs); }));
  ok &= criterion(9, "ROS2 with A_diff stage matrix", need_setup([&] { return diffusion_stage(runs); }));
  ok &= criterion(10, "Test 2 (64x64)", test2);
  if (full) {
    criterion(11, "256x256 full scale", full_scale);
  } else {
    std::printf("criterion 11 SKIP: 256x256 full scale: run with --full\n");
  }
  return ok ? 0 : 1;
}
