#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "expint/dense.hpp"

namespace expint {

inline constexpr std::size_t kDefaultExpmDimensionCap = 4096;

/// e^H by scaling and squaring with the degree-13 diagonal Pade approximant.
/// H is scaled by 2^-s so that ||H/2^s||_1 <= 5.37.
DenseMatrix expm_dense(const DenseMatrix& h,
                       std::size_t dimension_cap = kDefaultExpmDimensionCap);

/// phi(z) = (e^z - 1)/z, phi(0) = 1. Taylor series for |z| < 1e-2.
double phi_scalar(double z);

/// t * phi(-t H) b, via one exponential of the augmented matrix
/// [[-tH, t b], [0, 0]].
Vector phi_action_dense(const DenseMatrix& h, std::span<const double> b, double t);

/// sum_{j=1..p} phi_j(B) w_j for w = {w_1, ..., w_p}, computed from the last
/// column of exp([[B, W], [0, J]]) with J the p x p nilpotent shift.
Vector phi_combination(const DenseMatrix& b, const std::vector<Vector>& w);

/// e^B together with phi_j(B) E for j = 1..p (E has n rows, any width).
struct PhiBlocks {
  DenseMatrix exp;
  std::vector<DenseMatrix> phi_times_e;  // phi_times_e[j-1] = phi_j(B) E
};
PhiBlocks phi_blocks(const DenseMatrix& b, const DenseMatrix& e, std::size_t p);

}  // namespace expint
