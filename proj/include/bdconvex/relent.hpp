#pragma once

// Relative-entropy machinery: Shannon entropy, KL divergence, constrained
// minimization over the probability simplex via the dual Newton iteration,
// and the closed-form relative entropy of entanglement of Bell-diagonal
// states. Entropy values are reported in bits; computation runs in natural
// logarithms with a single final conversion, so Lagrange multipliers are in
// natural-log units.

#include <span>

#include "bdconvex/bdstate.hpp"
#include "bdconvex/convex.hpp"
#include "bdconvex/linalg.hpp"

namespace bdconvex {

// minimize sum_j w_j log(w_j / q_j)  over  {w >= 0, 1^T w = 1, A w = b}
// for a strictly positive prior q.
struct EntropyProblem {
  Vec q;          // k entries, > 0, summing to 1
  linalg::Mat a;  // d x k mean-constraint matrix
  Vec b;          // d entries
};

// -sum w_i log2 w_i with 0 log 0 = 0. Throws not_distribution.
double shannon_entropy(std::span<const double> w);

// sum_i w_i log2(w_i / q_i); returns +infinity when some w_i > 0 has q_i = 0.
double relative_entropy(std::span<const double> w, std::span<const double> q);

// true iff a strictly positive w exists with 1^T w = 1, A w = b
// (decided by a small LP maximizing the margin min_i w_i).
bool slater_check(const EntropyProblem& prob);

struct MinEntropyResult {
  Vec w_star;
  Vec y_star;         // multipliers of A w = b (nats)
  double zeta_star;   // multiplier of 1^T w = 1 (nats)
  double value_bits;
  int newton_iterations = 0;
};

// Damped dual Newton on y: w_j(y) = q_j exp(-a_j^T y) / normalizer, iterated
// until ||A w - b||_inf < 1e-12. Throws no_slater_point / newton_divergence.
MinEntropyResult min_relative_entropy(const EntropyProblem& prob);

// One-parameter profile of the constrained minimum for an entangled state
// with dominant component p: b1 log2(b1/p) + (1-b1) log2((1-b1)/(1-p)).
// Defined on b1 in (0, 1); values with b1 <= 1/2 are the REE-relevant ones.
// The profile is strictly decreasing on (0, p), so its minimum over the
// separable range (0, 1/2] sits at the boundary b1 = 1/2.
double ree_profile(const BDState& rho, double b1);

struct REEResult {
  double value_bits = 0.0;
  BDState closest;          // minimizing separable state
  double multiplier = 0.0;  // y1* (nats)
  double concurrence = 0.0;
  bool infinite = false;    // set when the input is a pure Bell state
};

// Closed-form relative entropy of entanglement: for Entangled(k) the closest
// state has component k equal to 1/2, others p_i / (2(1 - p_k)), and the
// value equals -1/2 log2(1 - c^2) with c the concurrence. Separable inputs
// return value 0 with themselves as the closest state.
REEResult ree_bd(const BDState& rho);

// Runs convex::check_kkt at the Newton optimum of the dominant-component
// constraint w_k = 1/2, with analytically assembled gradients.
KKTReport ree_kkt_report(const BDState& rho, double tol);

}  // namespace bdconvex
