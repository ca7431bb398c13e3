#include "expint/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <limits>
#include <ostream>
#include <thread>

namespace expint {

namespace {

struct MethodInfo {
  Method method;
  std::string_view name;
  std::string_view label;
};

constexpr MethodInfo kMethods[] = {
    {Method::Ebk, "ebk", "EBK"},
    {Method::Ee2Rt, "ee2-rt", "EE2/RT"},
    {Method::Ee2Expokit, "ee2-expokit", "EE2/EXPOKIT"},
    {Method::ExpEuler, "expeuler", "ExpEuler/RT"},
    {Method::Ros2, "ros2", "ROS2 A"},
    {Method::Ros2Diff, "ros2-diff", "ROS2 A_diff"},
};

const MethodInfo& info(Method m) {
  for (const auto& i : kMethods)
    if (i.method == m) return i;
  throw ContractViolation("unknown method");
}

double thread_cpu_seconds() {
  timespec ts{};
  clock_gettime(CLOCK_THREAD_CPUTIME_ID, &ts);
  return static_cast<double>(ts.tv_sec) + 1e-9 * static_cast<double>(ts.tv_nsec);
}

std::string format(const char* fmt, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, x);
  return buf;
}

}  // namespace

std::string_view method_name(Method m) { return info(m).name; }
std::string_view method_label(Method m) { return info(m).label; }

Method parse_method(std::string_view name) {
  for (const auto& i : kMethods)
    if (i.name == name) return i.method;
  throw ContractViolation("unknown method '" + std::string(name) + "'");
}

bool uses_time_step(Method m) { return m != Method::Ebk; }
bool uses_tolerance(Method m) { return m != Method::Ros2 && m != Method::Ros2Diff; }

DiscreteOperator build_operator(const ProblemSpec& spec) {
  detail::require(spec.nu > 0.0, "build_operator: nu must be positive");
  const StretchedMesh mesh = build_stretched_grid(spec.mesh, preset_stretch_ratio(spec.mesh));
  AssemblyOptions opt;
  opt.nu = spec.nu;
  opt.wind_scale = spec.wind_scale;
  opt.mass = spec.mass;
  return assemble_operator(mesh, opt);
}

TestProblem build_problem(const ProblemSpec& spec, const ReferenceOptions& reference) {
  detail::require(spec.test == 1 || spec.test == 2, "build_problem: test must be 1 or 2");
  if (spec.test == 1) return build_test1(build_operator(spec), spec.horizon);
  TestProblem p = build_test2(build_operator(spec), spec.horizon);
  p.reference_final = reference_solution(p, reference).y;
  return p;
}

std::vector<BenchCase> default_cases(int test) {
  detail::require(test == 1 || test == 2, "default_cases: test must be 1 or 2");
  std::vector<BenchCase> out;
  if (test == 1) {
    for (double tol : {1e-4, 1e-6}) out.push_back({Method::Ebk, 0.0, tol, 120, 2});
    for (Method m : {Method::Ee2Rt, Method::Ee2Expokit})
      for (double dt : {20.0, 10.0, 5.0}) out.push_back({m, dt, 1e-4, 0, 0});
    for (double dt : {20.0, 10.0, 5.0}) out.push_back({Method::Ros2, dt, 0.0, 0, 0});
    for (double dt : {2.0, 1.0, 0.5}) out.push_back({Method::Ros2Diff, dt, 0.0, 0, 0});
  } else {
    for (double tol : {1e-4, 1e-6}) out.push_back({Method::Ebk, 0.0, tol, 80, 2});
    for (double dt : {10.0, 5.0}) out.push_back({Method::Ee2Rt, dt, 1e-6, 0, 0});
  }
  return out;
}

std::vector<BenchCase> expand_cases(int test, std::span<const Method> methods,
                                    std::span<const double> dts, std::span<const double> tols,
                                    std::span<const std::size_t> ns,
                                    std::span<const std::size_t> m) {
  const std::vector<BenchCase> defaults = default_cases(test);
  std::vector<BenchCase> out;
  for (Method method : methods) {
    std::vector<double> d(dts.begin(), dts.end());
    std::vector<double> t(tols.begin(), tols.end());
    std::vector<std::size_t> s(ns.begin(), ns.end());
    std::vector<std::size_t> r(m.begin(), m.end());
    auto add_default = [&](auto& list, auto field) {
      if (!list.empty()) return;
      for (const BenchCase& c : defaults)
        if (c.method == method && std::find(list.begin(), list.end(), c.*field) == list.end())
          list.push_back(c.*field);
    };
    add_default(d, &BenchCase::dt);
    add_default(t, &BenchCase::tol);
    add_default(s, &BenchCase::ns);
    add_default(r, &BenchCase::m);
    // Methods outside the published grid (plain exponential Euler) borrow EE2/RT's values.
    if (method == Method::ExpEuler) {
      for (const BenchCase& c : defaults) {
        if (c.method != Method::Ee2Rt) continue;
        if (dts.empty() && std::find(d.begin(), d.end(), c.dt) == d.end()) d.push_back(c.dt);
        if (tols.empty() && std::find(t.begin(), t.end(), c.tol) == t.end()) t.push_back(c.tol);
      }
    }
    if (!uses_time_step(method)) d = {0.0};
    if (!uses_tolerance(method)) t = {0.0};
    if (method != Method::Ebk) s = {0}, r = {0};
    if (method == Method::Ebk) {
      if (s.empty()) s = {test == 1 ? std::size_t{120} : std::size_t{80}};
      if (r.empty()) r = {2};
    }
    for (double dt : d)
      for (double tol : t)
        for (std::size_t n_s : s)
          for (std::size_t rank : r) out.push_back({method, dt, tol, n_s, rank});
  }
  return out;
}

bool BenchResult::any_failed() const {
  return std::any_of(rows.begin(), rows.end(), [](const BenchRow& r) { return r.failed; });
}

BenchRow run_case(const TestProblem& problem, const BenchCase& c, const BenchOptions& options,
                  std::string* trace, std::size_t row_index) {
  BenchRow row;
  row.spec = c;
  const std::string prefix =
      std::to_string(row_index) + "," + std::string(method_name(c.method)) + ",";
  StepObserver observer;
  if (trace) {
    observer = [&](std::size_t step, double t, std::span<const double> y) {
      const double value = problem.exact ? relative_error(y, problem.exact(t)) : norm2(y);
      *trace += prefix + (problem.exact ? "step_error," : "step_norm,") + std::to_string(step) +
                "," + format("%.17g", t) + "," + format("%.17g", value) + "\n";
    };
  }

  const CsrMatrix& a = problem.op.a;
  const double start = thread_cpu_seconds();
  try {
    RunReport rep;
    switch (c.method) {
      case Method::Ebk: {
        detail::require(c.ns >= 2 && c.m >= 1, "ebk: n_s >= 2 and m >= 1 required");
        const SourceApprox src =
            ebk_source(a, problem.v, problem.g, problem.horizon, c.ns, c.m, options.interpolation);
        EbkOptions eopt;
        eopt.tol = c.tol;
        const EbkSolution sol = ebk_solve(a, problem.v, src, eopt);
        rep.y_final = sol.final_value();
        rep.fevals = sol.report().matvecs;
        if (trace) {
          const auto& hist = sol.report().residual_history;
          for (std::size_t k = 0; k < hist.size(); ++k)
            *trace += prefix + "ebk_residual," + std::to_string(k + 1) + ",," +
                      format("%.17g", hist[k]) + "\n";
        }
        break;
      }
      case Method::Ee2Rt:
      case Method::Ee2Expokit:
      case Method::ExpEuler: {
        PhiEngineOptions engine;
        engine.engine = c.method == Method::Ee2Expokit ? PhiEngine::Expokit : PhiEngine::ResidualTime;
        engine.tol = c.tol;
        const TimeGrid grid = TimeGrid::uniform(0.0, problem.horizon, c.dt);
        rep = c.method == Method::ExpEuler
                  ? exp_euler_solve(a, problem.v, problem.g, grid, engine, observer)
                  : ee2_solve(a, problem.v, problem.g, grid, engine, observer);
        break;
      }
      case Method::Ros2:
      case Method::Ros2Diff: {
        const TimeGrid grid = TimeGrid::uniform(0.0, problem.horizon, c.dt);
        const CsrMatrix& a_hat = c.method == Method::Ros2 ? a : problem.op.a_diff;
        rep = ros2_solve(a, a_hat, problem.v, problem.g, grid, {}, observer);
        break;
      }
    }
    row.fevals = rep.fevals;
    row.lss = rep.linear_solves;
    if (all_finite(rep.y_final)) {
      row.error = relative_error(rep.y_final, problem.target());
    } else {
      row.error = std::numeric_limits<double>::infinity();
      row.note = "solution not finite";
    }
  } catch (const std::exception& e) {
    row.error = std::numeric_limits<double>::quiet_NaN();
    row.failed = true;
    row.note = e.what();
  }
  row.cpu_s = thread_cpu_seconds() - start;
  return row;
}

BenchResult run_benchmark(const TestProblem& problem, std::span<const BenchCase> cases,
                          const BenchOptions& options) {
  BenchResult result;
  result.rows.resize(cases.size());
  std::vector<std::string> traces(cases.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cases.size(); i = next++)
      result.rows[i] = run_case(problem, cases[i], options, options.trace ? &traces[i] : nullptr, i);
  };
  const std::size_t jobs = std::max<std::size_t>(1, std::min(options.jobs, cases.size()));
  {
    std::vector<std::jthread> pool;
    for (std::size_t j = 1; j < jobs; ++j) pool.emplace_back(worker);
    worker();
  }
  if (options.trace) {
    result.trace_csv = "row,method,kind,index,t,value\n";
    for (const std::string& t : traces) result.trace_csv += t;
  }
  return result;
}

void write_csv(std::ostream& out, std::span<const BenchRow> rows) {
  out << "method,dt,tol,ns,m,cpu_s,fevals,lss,error\n";
  for (const BenchRow& r : rows) {
    const BenchCase& c = r.spec;
    const bool ebk = c.method == Method::Ebk;
    out << method_name(c.method) << ',' << (uses_time_step(c.method) ? format("%g", c.dt) : "")
        << ',' << (uses_tolerance(c.method) ? format("%g", c.tol) : "") << ','
        << (ebk ? std::to_string(c.ns) : "") << ',' << (ebk ? std::to_string(c.m) : "") << ','
        << format("%.3f", r.cpu_s) << ',' << r.fevals << ',' << r.lss << ','
        << format("%.6e", r.error) << '\n';
  }
}

void write_table(std::ostream& out, std::span<const BenchRow> rows) {
  char line[256];
  std::snprintf(line, sizeof line, "%-40s %9s %8s %8s %12s\n", "method", "cpu, s", "fevals",
                "l.s.s.", "error");
  out << line;
  for (const BenchRow& r : rows) {
    const BenchCase& c = r.spec;
    std::string label(method_label(c.method));
    if (uses_time_step(c.method)) label += ", dt=" + format("%g", c.dt);
    if (uses_tolerance(c.method)) label += ", tol=" + format("%g", c.tol);
    if (c.method == Method::Ebk) label += ", ns=" + std::to_string(c.ns) + ", m=" + std::to_string(c.m);
    const std::string lss = r.lss ? std::to_string(r.lss) : "---";
    std::snprintf(line, sizeof line, "%-40s %9.2f %8zu %8s %12.3e", label.c_str(), r.cpu_s,
                  r.fevals, lss.c_str(), r.error);
    out << line;
    if (!r.note.empty()) out << "  (" << r.note << ')';
    out << '\n';
  }
}

std::vector<SourceStudyRow> source_study(const TestProblem& problem,
                                         std::span<const std::size_t> ns_values, std::size_t m,
                                         double ebk_tol, Interpolation interp) {
  const CsrMatrix& a = problem.op.a;
  const Vector av = spmv(a, problem.v);
  std::vector<SourceStudyRow> out;
  for (std::size_t n_s : ns_values) {
    const SourceApprox src = ebk_source(a, problem.v, problem.g, problem.horizon, n_s, m, interp);
    const ApproxError ae = approximation_error(src, problem.g, av, 10);
    EbkOptions eopt;
    eopt.tol = ebk_tol;
    const EbkSolution sol = ebk_solve(a, problem.v, src, eopt);
    out.push_back({n_s, ae.max_error, ae.relative_integral_error,
                   relative_error(sol.final_value(), problem.target()), sol.report().matvecs});
  }
  return out;
}

void write_study_csv(std::ostream& out, std::span<const SourceStudyRow> rows) {
  out << "ns,max_error,integral_error,ebk_error,ebk_fevals\n";
  for (const SourceStudyRow& r : rows)
    out << r.ns << ',' << format("%.6e", r.max_error) << ',' << format("%.6e", r.integral_error)
        << ',' << format("%.6e", r.ebk_error) << ',' << r.ebk_matvecs << '\n';
}

void write_study_table(std::ostream& out, std::span<const SourceStudyRow> rows) {
  char line[160];
  std::snprintf(line, sizeof line, "%6s %14s %14s %12s %8s\n", "n_s", "max |g-Up|",
                "int. rel. err", "EBK error", "fevals");
  out << line;
  for (const SourceStudyRow& r : rows) {
    std::snprintf(line, sizeof line, "%6zu %14.3e %14.3e %12.3e %8zu\n", r.ns, r.max_error,
                  r.integral_error, r.ebk_error, r.ebk_matvecs);
    out << line;
  }
}

}  // namespace expint
