#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "expint/problems.hpp"

namespace expint {

enum class Method { Ebk, Ee2Rt, Ee2Expokit, ExpEuler, Ros2, Ros2Diff };

/// Command line spelling: ebk, ee2-rt, ee2-expokit, expeuler, ros2, ros2-diff.
std::string_view method_name(Method m);
/// Table spelling, e.g. "EE2/RT" or "ROS2 A_diff".
std::string_view method_label(Method m);
/// Throws ContractViolation for an unknown name.
Method parse_method(std::string_view name);
bool uses_time_step(Method m);
bool uses_tolerance(Method m);

struct ProblemSpec {
  int test = 1;
  std::size_t mesh = 64;
  double nu = 1.0 / 6400.0;
  double wind_scale = 1.0;
  MassScaling mass = MassScaling::None;
  double horizon = 1000.0;
};

DiscreteOperator build_operator(const ProblemSpec& spec);
/// Test 2 gets its reference solution attached.
TestProblem build_problem(const ProblemSpec& spec, const ReferenceOptions& reference = {});

/// One benchmark run. Fields a method does not use are ignored.
struct BenchCase {
  Method method = Method::Ebk;
  double dt = 0.0;
  double tol = 0.0;
  std::size_t ns = 0;
  std::size_t m = 0;
};

struct BenchRow {
  BenchCase spec;
  double cpu_s = 0.0;
  std::size_t fevals = 0;
  std::size_t lss = 0;
  double error = 0.0;  // NaN when the run failed
  bool failed = false;
  std::string note;
};

/// The published grid: Test 1 runs EBK (tol 1e-4, 1e-6; n_s 120, m 2),
/// EE2/RT and EE2/EXPOKIT (dt 20, 10, 5; tol 1e-4), ROS2 (dt 20, 10, 5) and
/// ROS2 A_diff (dt 2, 1, 0.5). Test 2 runs EBK (tol 1e-4, 1e-6; n_s 80) and
/// EE2/RT (dt 10, 5; tol 1e-6).
std::vector<BenchCase> default_cases(int test);

/// Cross product of the given values per method. An empty list falls back to
/// the values default_cases uses for that method.
std::vector<BenchCase> expand_cases(int test, std::span<const Method> methods,
                                    std::span<const double> dts, std::span<const double> tols,
                                    std::span<const std::size_t> ns,
                                    std::span<const std::size_t> m);

struct BenchOptions {
  std::size_t jobs = 1;
  bool trace = false;
  Interpolation interpolation = Interpolation::CubicHermite;
};

struct BenchResult {
  std::vector<BenchRow> rows;  // in case order
  std::string trace_csv;       // "row,method,kind,index,t,value" when tracing
  bool any_failed() const;
};

/// Runs one case. Failures are caught and reported in the row.
BenchRow run_case(const TestProblem& problem, const BenchCase& c, const BenchOptions& options,
                  std::string* trace = nullptr, std::size_t row_index = 0);

/// Runs the cases on a pool of options.jobs threads.
BenchResult run_benchmark(const TestProblem& problem, std::span<const BenchCase> cases,
                          const BenchOptions& options = {});

/// method,dt,tol,ns,m,cpu_s,fevals,lss,error; unused fields stay empty.
void write_csv(std::ostream& out, std::span<const BenchRow> rows);
void write_table(std::ostream& out, std::span<const BenchRow> rows);

struct SourceStudyRow {
  std::size_t ns = 0;
  double max_error = 0.0;
  double integral_error = 0.0;
  double ebk_error = 0.0;
  std::size_t ebk_matvecs = 0;
};

/// Source-model quality against EBK accuracy for each snapshot count. The
/// model is of g(t) - A v; errors are checked on a grid 10x finer.
std::vector<SourceStudyRow> source_study(const TestProblem& problem,
                                         std::span<const std::size_t> ns_values, std::size_t m,
                                         double ebk_tol,
                                         Interpolation interp = Interpolation::CubicHermite);
void write_study_csv(std::ostream& out, std::span<const SourceStudyRow> rows);
void write_study_table(std::ostream& out, std::span<const SourceStudyRow> rows);

}  // namespace expint
