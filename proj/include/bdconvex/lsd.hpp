#pragma once

// Optimal Lewenstein-Sanpera decomposition of Bell-diagonal states in closed
// form: rho = lambda * separable + (1 - lambda) * |psi_k><psi_k| with the
// largest possible separable weight lambda.

#include "bdconvex/bdstate.hpp"

namespace bdconvex {

struct LSDecomposition {
  double lambda = 1.0;         // separable weight, in [0, 1]
  BDState separable;           // rho'_s; boundary state for entangled inputs
  int entangled_index = 1;     // bell index (1..4) of the pure part
  double entangled_weight = 0; // 1 - lambda
};

// Largest lambda with rho - lambda sigma >= 0 for this particular separable
// candidate: min_i p_i / sigma_i over the indices where sigma_i > 0.
// A candidate with sigma_i > 0 where p_i = 0 yields 0 rather than an error.
double lambda_for_candidate(const BDState& rho, const BDState& sigma);

// Closed-form optimum. Entangled inputs with dominant component p_k get
// lambda = 2(1 - p_k) and the boundary separable state with k-th component
// 1/2, others p_i / (2(1 - p_k)); separable inputs return lambda = 1 with
// themselves as the separable part. A pure Bell input has lambda = 0 and the
// separable factor is reported as the uniform state (its weight is zero).
LSDecomposition optimal_lsd(const BDState& rho);

// Purity cross-check on the full 4x4 matrix: recombines the decomposition
// (throwing mismatch if it misses rho by more than 1e-9) and returns the
// second-largest eigenvalue of (rho - lambda sigma) / (1 - lambda), which
// vanishes exactly when the residual is pure. Returns 0 when lambda = 1.
double residual_check(const BDState& rho, const LSDecomposition& d);

}  // namespace bdconvex
