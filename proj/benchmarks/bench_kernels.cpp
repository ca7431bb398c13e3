#include <benchmark/benchmark.h>

#include <map>

#include "expint/bench.hpp"
#include "expint/expm.hpp"
#include "expint/svd.hpp"

namespace {

const expint::DiscreteOperator& op(std::size_t n) {
  static std::map<std::size_t, expint::DiscreteOperator> cache;
  auto it = cache.find(n);
  if (it == cache.end()) {
    expint::ProblemSpec spec;
    spec.mesh = n;
    it = cache.emplace(n, expint::build_operator(spec)).first;
  }
  return it->second;
}

void BM_Spmv(benchmark::State& state) {
  const auto& a = op(static_cast<std::size_t>(state.range(0))).a;
  expint::Vector x(a.cols(), 1.0), y(a.rows());
  for (auto _ : state) {
    expint::spmv(a, x, y);
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(a.nnz()));
}
BENCHMARK(BM_Spmv)->Arg(64)->Arg(128)->Arg(256);

void BM_Expm(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  expint::DenseMatrix h(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    h(i, i) = -1.0 - 0.1 * static_cast<double>(i);
    if (i + 1 < n) h(i + 1, i) = 0.5;
    if (i + 1 < n) h(i, i + 1) = 0.3;
  }
  for (auto _ : state) benchmark::DoNotOptimize(expint::expm_dense(h));
}
BENCHMARK(BM_Expm)->Arg(10)->Arg(32)->Arg(102);

void BM_PhivRt(benchmark::State& state) {
  const auto& d = op(64);
  const expint::Vector v(d.size(), 0.0);
  expint::PhivOptions opt;
  opt.tol = 1e-4;
  const double dt = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(expint::phiv_rt(d.a, v, d.g_bc, dt, opt));
}
BENCHMARK(BM_PhivRt)->Arg(5)->Arg(20)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_PhivExpokit(benchmark::State& state) {
  const auto& d = op(64);
  const expint::Vector v(d.size(), 0.0);
  expint::PhivOptions opt;
  opt.tol = 1e-4;
  opt.krylov_dim = 30;
  const double dt = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(expint::phiv_expokit(d.a, v, d.g_bc, dt, opt));
}
BENCHMARK(BM_PhivExpokit)->Arg(5)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_ThinSvd(benchmark::State& state) {
  const auto& d = op(64);
  const auto cols = static_cast<std::size_t>(state.range(0));
  expint::DenseMatrix s(d.size(), cols);
  for (std::size_t j = 0; j < cols; ++j) {
    const double a = expint::alpha(1000.0 * static_cast<double>(j) / static_cast<double>(cols)).value;
    for (std::size_t i = 0; i < d.size(); ++i) s(i, j) = a * d.g_bc[i] + d.g_peak[i];
  }
  for (auto _ : state) benchmark::DoNotOptimize(expint::thin_svd(s, 2));
}
BENCHMARK(BM_ThinSvd)->Arg(30)->Arg(120)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
