#pragma once

// Desk-scale semidefinite and linear programming with primal-dual
// certificates. The solver is a primal barrier method with exact Newton
// centering on -log det F(x); the outer loop multiplies the barrier
// parameter by 10 and stops once m/t drops below the requested gap
// tolerance, at which point Z = F(x)^-1 / t is a dual-feasible certificate.
// Linear programs ride the same machinery on diagonal matrices after the
// affine constraints are eliminated, followed by purification to a basic
// optimal solution. Everything is deterministic for identical inputs.

#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bdconvex/bdstate.hpp"
#include "bdconvex/linalg.hpp"

namespace bdconvex {

// minimize c^T x  subject to  F(x) = F0 + sum_i x_i F_i >= 0,
// with Hermitian F0, F_i. Desk scale: n <= 8 variables, m <= 16 rows.
struct SDPProblem {
  Vec c;
  linalg::CMat f0;
  std::vector<linalg::CMat> fi;

  linalg::CMat f_of(std::span<const double> x) const;
};

enum class SolveStatus { optimal, infeasible, unbounded, max_iterations };
const char* to_string(SolveStatus status);

struct SDPSolution {
  SolveStatus status = SolveStatus::max_iterations;
  Vec x;               // primal point
  linalg::CMat z;      // dual point, Z = F(x)^-1 / t at the final center
  double pstar = 0.0;  // c^T x
  double dstar = 0.0;  // -tr(F0 Z)
  double gap = 0.0;    // pstar - dstar
  int newton_steps = 0;
  // (primal, dual) objective values at each completed centering; every pair
  // satisfies weak duality and the trace documents the certified bracket.
  std::vector<std::pair<double, double>> trace;
};

// Phase-I initialization (minimize the slack s with F(x) + sI >= 0) finds a
// strictly feasible start or reports SolveStatus::infeasible.
SDPSolution solve_sdp(const SDPProblem& prob, double tol = 1e-8);

// c^T x + tr(F0 Z), cross-checked against tr(F(x) Z); the two expressions
// must agree within 1e-10 and the result is certified >= -1e-10.
// Throws not_feasible naming the violated constraint otherwise.
double duality_gap(const SDPProblem& prob, std::span<const double> x, const linalg::CMat& z);

// true iff the max-entry norms of F(x)Z and ZF(x) are both <= tol.
bool check_slackness(const linalg::CMat& fx, const linalg::CMat& z, double tol);
double slackness_residual(const linalg::CMat& fx, const linalg::CMat& z);

// Scalar function with an analytic gradient, as used by check_kkt.
struct Differentiable {
  std::function<double(std::span<const double>)> value;
  std::function<Vec(std::span<const double>)> gradient;
};

struct KKTReport {
  bool primal_feasible_eq = false;    // h_i(x) = 0
  bool primal_feasible_ineq = false;  // g_i(x) <= 0
  bool dual_feasible = false;         // y_i >= 0
  bool complementary = false;         // y_i g_i(x) = 0
  bool stationary = false;            // grad f + sum zeta_i grad h_i + sum y_i grad g_i = 0
  double max_violation = 0.0;
  Vec zeta;
  Vec y;

  bool all() const {
    return primal_feasible_eq && primal_feasible_ineq && dual_feasible && complementary &&
           stationary;
  }
};

// Evaluates the five first-order optimality conditions at (x, zeta, y),
// each within tol. Gradients are supplied analytically by the caller.
KKTReport check_kkt(const Differentiable& objective,
                    const std::vector<Differentiable>& equalities,
                    const std::vector<Differentiable>& inequalities, std::span<const double> x,
                    std::span<const double> zeta, std::span<const double> y, double tol);

// minimize c^T x subject to A x = b, x >= 0 (feasible and bounded).
// The returned triple satisfies A^T zeta + y = c, A x = b, x, y >= 0 and
// x_i y_i = 0 within 1e-9; strictly_complementary reports whether
// x_i + y_i > 1e-9 holds at every index of the returned pair.
struct LPSolution {
  Vec x;
  Vec zeta;
  Vec y;
  double value = 0.0;
  bool strictly_complementary = false;
};
LPSolution solve_lp(const Vec& c, const linalg::Mat& a, const Vec& b);

// Brute-force vertex enumeration over all column bases; the independent
// cross-check for solve_lp (and a debug-build assertion inside it).
struct LPEnumeration {
  bool feasible = false;
  double value = 0.0;
  Vec x;  // lexicographically smallest optimal vertex
  std::vector<Vec> optimal_vertices;
};
LPEnumeration solve_lp_enumerate(const Vec& c, const linalg::Mat& a, const Vec& b);

// One-variable SDP: minimize -lambda subject to rho - lambda sigma >= 0,
// diagonal in the Bell basis. rho must classify entangled, sigma separable.
SDPProblem lsd_as_sdp(const BDState& rho, const BDState& sigma);

// Globally optimal separable weight over the whole separable octahedron,
// via the substitution q_i = lambda p'_i: maximize sum q subject to
// 0 <= q_i <= p_i and 2 q_i <= sum_j q_j.
struct LsdLpResult {
  double lambda = 0.0;
  BDState sigma;
};
LsdLpResult lsd_lp_over_separable(const BDState& rho);

// Problem import/export: {"c": [...], "F0": [[[re,im],...],...], "Fi": [...]}
// with row-major matrices whose entries are [re, im] pairs.
std::string sdp_to_json(const SDPProblem& prob);
SDPProblem sdp_from_json(const std::string& text);

}  // namespace bdconvex
