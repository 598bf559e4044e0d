#pragma once

// Bell-diagonal two-qubit states: probability/correlation representations,
// density matrices, and geometric separability classification.
//
// Bell-basis convention (index 1..4 in all public "bell index" fields):
//   1: phi+ = (|00> + |11>)/sqrt2     2: phi- = (|00> - |11>)/sqrt2
//   3: psi+ = (|01> + |10>)/sqrt2     4: psi- = (|01> - |10>)/sqrt2
// Probability arrays are plain std::array<double,4>, 0-based as usual;
// entry i holds the weight of Bell state i+1.

#include <array>
#include <string>

#include "bdconvex/linalg.hpp"

namespace bdconvex {

struct TVector {
  double t1 = 0, t2 = 0, t3 = 0;
};

// 4x4 Hermitian density matrix in the computational basis |00>,|01>,|10>,|11>.
using DensityMatrix4 = linalg::CMat;

// Probability 4-vector over the Bell basis. Immutable; construct through
// bd_from_probs or tvec_to_probs, which validate and normalize. Default
// construction gives the maximally mixed state.
class BDState {
 public:
  BDState() : p_{0.25, 0.25, 0.25, 0.25} {}
  const std::array<double, 4>& probs() const { return p_; }
  double p(int i) const { return p_[i]; }  // 0-based component access

 private:
  friend BDState bd_from_probs(const std::array<double, 4>& p);
  explicit BDState(const std::array<double, 4>& p) : p_(p) {}
  std::array<double, 4> p_;
};

enum class Region { separable_interior, separable_boundary, entangled };

struct RegionClass {
  Region region = Region::separable_interior;
  int bell_index = 1;  // dominant Bell index (1..4); the entangled cell for Region::entangled
};

// Tolerances shared by the geometric predicates.
inline constexpr double kBoundaryBand = 1e-12;      // classification band around p = 1/2
inline constexpr double kNormalizationTol = 1e-9;   // accepted |sum p - 1| on input
inline constexpr double kNegativeClampTol = 1e-12;  // negatives clamped to 0 below this

// Octahedron vertices (+/- unit correlation axes); boundary separable states.
inline constexpr std::array<TVector, 6> kOctahedronVertices = {
    TVector{1, 0, 0},  TVector{-1, 0, 0}, TVector{0, 1, 0},
    TVector{0, -1, 0}, TVector{0, 0, 1},  TVector{0, 0, -1}};

// Validates, clamps round-off negatives in [-1e-12, 0), and renormalizes.
// Throws negative_probability / not_normalized.
BDState bd_from_probs(const std::array<double, 4>& p);

TVector probs_to_tvec(const BDState& s);

// Inverse of probs_to_tvec; throws outside_tetrahedron when any positivity
// form 1 +/- t1 +/- t2 +/- t3 dips below -1e-12.
BDState tvec_to_probs(const TVector& t);

// rho = 1/4 (I (x) I + sum_i t_i sigma_i (x) sigma_i).
DensityMatrix4 density_matrix(const BDState& s);

// Projector |psi_k><psi_k| for bell index k in 1..4.
DensityMatrix4 bell_projector(int k);

RegionClass classify(const BDState& s);

// max(0, 2 max_i p_i - 1); invariant under Bell relabeling.
double concurrence(const BDState& s);

// Minimum eigenvalue of the partial transpose over the second qubit.
// Nonnegative (within 1e-10) exactly on separable Bell-diagonal states.
double ppt_min_eigenvalue(const DensityMatrix4& m);

DensityMatrix4 partial_transpose(const DensityMatrix4& m);

// Dominant Bell index (1..4), smallest index on ties.
int dominant_index(const BDState& s);

// State JSON: {"p": [p1,p2,p3,p4]} or {"t": [t1,t2,t3]}, exactly one key.
// Throws parse_error for malformed documents and the bd_from_probs /
// tvec_to_probs errors for invalid states.
BDState bd_state_from_json(const std::string& text);

}  // namespace bdconvex
