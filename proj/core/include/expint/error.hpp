#pragma once

#include <stdexcept>
#include <string>

namespace expint {

/// Thrown when a caller breaks a documented precondition (shape mismatch,
/// out-of-range parameter, malformed input file).
class ContractViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An iterative method stopped without meeting its tolerance.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, double best_residual)
      : std::runtime_error(what), best_residual_(best_residual) {}

  double best_residual() const noexcept { return best_residual_; }

 private:
  double best_residual_;
};

namespace detail {
inline void require(bool condition, const char* message) {
  if (!condition) throw ContractViolation(message);
}
}  // namespace detail

}  // namespace expint
