#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "expint/csr.hpp"

namespace expint {

/// Incomplete LU factorization with zero fill-in. Requires every diagonal
/// entry to be present in the sparsity pattern.
class Ilu0 {
 public:
  explicit Ilu0(const CsrMatrix& a);

  /// Solves (L U) z = r.
  Vector apply(std::span<const double> r) const;

 private:
  CsrMatrix factors_;
  std::vector<Index> diag_pos_;
};

struct GmresOptions {
  double tol = 1e-10;            // relative: ||M x - b|| <= tol * ||b||
  std::size_t restart = 50;
  std::size_t max_iterations = 10000;
};

struct GmresResult {
  Vector x;
  std::size_t iterations = 0;
  double relative_residual = 0.0;
  /// Least-squares residual estimate after each inner iteration; restart
  /// cycles are separated by the true residual at the cycle start.
  std::vector<std::vector<double>> cycle_residuals;
};

/// Right-preconditioned restarted GMRES for M x = b. Throws SolverError
/// (carrying the best relative residual seen) when max_iterations is hit.
GmresResult gmres_solve(const CsrMatrix& m, std::span<const double> b,
                        const GmresOptions& options = {}, const Ilu0* precond = nullptr,
                        std::optional<std::span<const double>> x0 = std::nullopt);

}  // namespace expint
