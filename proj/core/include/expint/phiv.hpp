#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>

#include "expint/arnoldi.hpp"
#include "expint/error.hpp"

namespace expint {

struct PhiEvalReport {
  std::size_t matvecs = 0;        // every product with A, incl. g - A v
  std::size_t arnoldi_steps = 0;  // Arnoldi extensions across restarts/substeps
  std::size_t restarts = 0;       // RT restarts
  std::size_t substeps = 0;       // accepted substeps (EXPOKIT mode)
  std::size_t rejections = 0;     // rejected substeps (EXPOKIT mode)
  double final_residual = 0.0;    // relative to ||g - A v||

  PhiEvalReport& operator+=(const PhiEvalReport& o);
};

struct PhivOptions {
  double tol = 1e-8;
  /// Maximum basis size (RT) or fixed basis size (EXPOKIT).
  std::size_t krylov_dim = 100;
  /// ||A||_1 if already known; computed when <= 0.
  double anorm1 = 0.0;
  /// CSV rows "restart,k,delta,residual" (RT) or "substep,k,tau,error"
  /// (EXPOKIT) are written here when set.
  std::ostream* trace = nullptr;
};

struct PhivResult {
  Vector y;
  PhiEvalReport report;
};

/// No point of the backtracking grid met the residual tolerance.
class RestartStagnation : public SolverError {
 public:
  using SolverError::SolverError;
};

/// y(t_end) for y' = -A y + g, y(0) = v, by Arnoldi with residual-based
/// stopping and residual-time restarting. The residual test is relative:
/// ||r_k(t)|| <= tol * ||g - A v||.
PhivResult phiv_rt(const CsrMatrix& a, std::span<const double> v, std::span<const double> g,
                   double t_end, const PhivOptions& options = {});

/// Same problem, integrated by adaptive substeps each using a fresh
/// fixed-size Krylov basis and the two-term a-posteriori error estimate of
/// EXPOKIT's phiv. As there, tol bounds the absolute local error per unit time.
/// Default basis size 30.
PhivResult phiv_expokit(const CsrMatrix& a, std::span<const double> v, std::span<const double> g,
                        double t_end, const PhivOptions& options = {.tol = 1e-8,
                                                                    .krylov_dim = 30});

}  // namespace expint
