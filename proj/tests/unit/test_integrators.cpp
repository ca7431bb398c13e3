#include <doctest.h>

#include <cmath>

#include "expint/integrators.hpp"
#include "generators.hpp"

using namespace expint;
using namespace expint::testing;

namespace {

CsrMatrix scalar(double a) { return CsrMatrix::from_triplets(1, 1, {{0, 0, a}}); }

// y' = -y + sin t, y(0) = 1
double forced_exact(double t) { return 1.5 * std::exp(-t) + 0.5 * (std::sin(t) - std::cos(t)); }
const SourceFunction kSine = [](double t) { return Vector{std::sin(t)}; };

const PhiEngineOptions kTight{PhiEngine::ResidualTime, 1e-12, 0};

double observed_order(double e_coarse, double e_fine) { return std::log2(e_coarse / e_fine); }

}  // namespace

TEST_CASE("time grid") {
  const TimeGrid g = TimeGrid::uniform(0.0, 1000.0, 20.0);
  CHECK(g.n_steps == 50);
  CHECK(g.time(50) == 1000.0);
  CHECK(g.time(1) == 20.0);
  CHECK(g.refined().n_steps == 100);
  const TimeGrid f = TimeGrid::uniform(0.0, 1.0, 0.1);
  CHECK(std::abs(f.n_steps * f.dt - 1.0) <= 1e-12);
  CHECK_THROWS_AS(TimeGrid::uniform(0.0, 1.0, 0.3), ContractViolation);
  CHECK_THROWS_AS(TimeGrid::uniform(0.0, 1.0, 0.0), ContractViolation);
  CHECK_THROWS_AS(TimeGrid::uniform(1.0, 1.0, 0.1), ContractViolation);
  CHECK_THROWS_AS(TimeGrid::uniform(0.0, 1.0, 2.0), ContractViolation);
}

TEST_CASE("exponential Euler step examples") {
  const Vector one{1.0};
  for (PhiEngine e : {PhiEngine::ResidualTime, PhiEngine::Expokit}) {
    const PhiEngineOptions opt{e, 1e-10, 0};
    CHECK(exp_euler_step(scalar(1.0), one, Vector{0.0}, 0.5, opt)[0] ==
          doctest::Approx(0.60653065971263342).epsilon(1e-9));
  }

  Rng rng(60);
  const CsrMatrix a = random_stable_csr(rng, 20);
  const Vector y = random_vector(rng, 20);
  const Vector eq = exp_euler_step(a, y, spmv(a, y), 3.0, kTight);
  CHECK(rel_diff(eq, y) <= 1e-14);

  const CsrMatrix zero(3, 3, std::vector<Index>(4, 0), {}, {});
  const Vector y0{1.0, 2.0, 3.0}, g{0.5, 0.0, -1.0};
  const Vector fe = exp_euler_step(zero, y0, g, 0.4, kTight);
  for (std::size_t i = 0; i < 3; ++i) CHECK(fe[i] == doctest::Approx(y0[i] + 0.4 * g[i]));
  CHECK_THROWS_AS(exp_euler_step(a, y, y, 0.0, kTight), ContractViolation);
}

TEST_CASE("constant source: exponential Euler and EE2 are exact for any dt") {
  Rng rng(61);
  const std::size_t n = 30;
  const CsrMatrix a = random_stable_csr(rng, n, 0.2);
  const Vector v = random_vector(rng, n), g = random_vector(rng, n);
  const Vector exact = voc_oracle(a.to_dense(), v, g, 2.0);
  for (PhiEngine e : {PhiEngine::ResidualTime, PhiEngine::Expokit}) {
    const double tol = 1e-8;
    const PhiEngineOptions opt{e, tol, 0};
    for (double dt : {2.0, 0.5, 0.25}) {
      const TimeGrid grid = TimeGrid::uniform(0.0, 2.0, dt);
      const SourceFunction src = [&](double) { return g; };
      const RunReport ee = exp_euler_solve(a, v, src, grid, opt);
      const RunReport ee2 = ee2_solve(a, v, src, grid, opt);
      CHECK(rel_diff(ee.y_final, exact) <= 10.0 * tol);
      CHECK(rel_diff(ee2.y_final, exact) <= 10.0 * tol);
      CHECK(rel_diff(ee2.y_final, ee.y_final) <= 10.0 * tol);
      CHECK(ee.fevals > 0);
      CHECK(ee2.fevals > ee.fevals);
    }
  }
}

TEST_CASE("orders on a scalar forced problem") {
  const CsrMatrix a = scalar(1.0);
  const Vector v{1.0};
  const double horizon = 4.0, exact = forced_exact(horizon);
  Vector e_ee, e_ee2, e_ros;
  for (double dt : {0.2, 0.1, 0.05}) {
    const TimeGrid grid = TimeGrid::uniform(0.0, horizon, dt);
    e_ee.push_back(std::abs(exp_euler_solve(a, v, kSine, grid, kTight).y_final[0] - exact));
    e_ee2.push_back(std::abs(ee2_solve(a, v, kSine, grid, kTight).y_final[0] - exact));
    e_ros.push_back(std::abs(ros2_solve(a, a, v, kSine, grid, {.tol = 1e-13}).y_final[0] - exact));
  }
  for (std::size_t i = 0; i + 1 < 3; ++i) {
    CHECK(observed_order(e_ee[i], e_ee[i + 1]) >= 0.8);
    CHECK(observed_order(e_ee[i], e_ee[i + 1]) <= 1.2);
    CHECK(observed_order(e_ee2[i], e_ee2[i + 1]) >= 1.8);
    CHECK(observed_order(e_ee2[i], e_ee2[i + 1]) <= 2.2);
    CHECK(observed_order(e_ros[i], e_ros[i + 1]) >= 1.8);
    CHECK(observed_order(e_ros[i], e_ros[i + 1]) <= 2.2);
  }
}

TEST_CASE("ROS2 on y' = -y") {
  const CsrMatrix a = scalar(1.0);
  const SourceFunction none = [](double) { return Vector{0.0}; };
  Vector err;
  for (double dt : {0.1, 0.05, 0.025}) {
    const RunReport r = ros2_solve(a, a, Vector{1.0}, none, TimeGrid::uniform(0.0, 1.0, dt));
    err.push_back(std::abs(r.y_final[0] - std::exp(-1.0)));
    CHECK(r.linear_solves == 2 * static_cast<std::size_t>(std::lround(1.0 / dt)));
  }
  CHECK(err[0] <= 0.1 * 0.1);
  CHECK(observed_order(err[0], err[1]) >= 1.8);
  CHECK(observed_order(err[0], err[1]) <= 2.2);
  CHECK(observed_order(err[1], err[2]) >= 1.8);
  CHECK(observed_order(err[1], err[2]) <= 2.2);

  const CsrMatrix zero(2, 2, std::vector<Index>(3, 0), {}, {});
  const RunReport c = ros2_solve(zero, zero, Vector{1.0, -2.0},
                                 [](double) { return Vector{0.0, 0.0}; },
                                 TimeGrid::uniform(0.0, 1.0, 0.25));
  CHECK(c.y_final == Vector{1.0, -2.0});
}

TEST_CASE("property: ROS2 does not depend on the linear solver tolerance") {
  for_all(5, 62, [](Rng& rng, std::size_t) {
    const std::size_t n = rng.index(30, 80);
    const CsrMatrix a = random_stable_csr(rng, n, 0.15);
    const Vector v = random_vector(rng, n), w = random_vector(rng, n);
    const SourceFunction g = [&](double t) { return scaled(std::cos(t), w); };
    const TimeGrid grid = TimeGrid::uniform(0.0, 2.0, 0.1);
    const RunReport loose = ros2_solve(a, a, v, g, grid, {.tol = 1e-10});
    const RunReport tight = ros2_solve(a, a, v, g, grid, {.tol = 1e-12});
    CHECK(rel_diff(loose.y_final, tight.y_final) <= 1e-8);
    CHECK(loose.linear_solves == 40);
    CHECK(loose.inner_iterations <= tight.inner_iterations);
  });
}

TEST_CASE("ROS2 against a dense oracle with the diffusion-part stage matrix") {
  Rng rng(63);
  const std::size_t n = 20;
  const CsrMatrix a = random_stable_csr(rng, n, 0.3);
  const Vector v = random_vector(rng, n), g = random_vector(rng, n);
  const Vector exact = voc_oracle(a.to_dense(), v, g, 1.0);
  const SourceFunction src = [&](double) { return g; };
  const CsrMatrix diag = [&] {
    std::vector<Triplet> t;
    const DenseMatrix d = a.to_dense();
    for (std::size_t i = 0; i < n; ++i) t.push_back({Index(i), Index(i), d(i, i)});
    return CsrMatrix::from_triplets(n, n, t);
  }();
  double prev = 0.0;
  for (double dt : {0.01, 0.005}) {
    const RunReport r = ros2_solve(a, diag, v, src, TimeGrid::uniform(0.0, 1.0, dt));
    const double e = rel_diff(r.y_final, exact);
    if (prev > 0.0) CHECK(observed_order(prev, e) >= 1.8);
    prev = e;
  }
}

TEST_CASE("observers see every step") {
  const CsrMatrix a = scalar(1.0);
  const TimeGrid grid = TimeGrid::uniform(0.0, 1.0, 0.25);
  std::vector<double> times;
  std::size_t last = 0;
  double last_y = 0.0;
  const StepObserver obs = [&](std::size_t step, double t, std::span<const double> y) {
    CHECK(step == last + 1);
    last = step;
    times.push_back(t);
    last_y = y[0];
  };
  const RunReport ee = exp_euler_solve(a, Vector{1.0}, kSine, grid, kTight, obs);
  CHECK(times.size() == 4);
  CHECK(times.back() == 1.0);
  CHECK(last_y == ee.y_final[0]);

  times.clear();
  last = 0;
  (void)ee2_solve(a, Vector{1.0}, kSine, grid, kTight, obs);
  CHECK(times.size() == 8);  // the dt/2 run

  times.clear();
  last = 0;
  const RunReport r = ros2_solve(a, a, Vector{1.0}, kSine, grid, {}, obs);
  CHECK(times.size() == 4);
  CHECK(last_y == r.y_final[0]);
}
