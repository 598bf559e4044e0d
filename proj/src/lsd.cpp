#include "bdconvex/lsd.hpp"

#include <cmath>
#include <limits>

#include "bdconvex/error.hpp"
#include "bdconvex/linalg.hpp"

namespace bdconvex {

double lambda_for_candidate(const BDState& rho, const BDState& sigma) {
  if (classify(sigma).region == Region::entangled)
    raise(Errc::not_separable, "candidate must classify separable");
  double lam = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 4; ++i) {
    if (sigma.p(i) <= 0.0) continue;  // unconstraining direction
    lam = std::min(lam, rho.p(i) / sigma.p(i));
  }
  return lam;  // some sigma_i > 0 always exists, so lam is finite
}

LSDecomposition optimal_lsd(const BDState& rho) {
  const RegionClass rc = classify(rho);
  LSDecomposition d;
  d.entangled_index = rc.bell_index;
  if (rc.region != Region::entangled) {
    d.lambda = 1.0;
    d.separable = rho;
    d.entangled_weight = 0.0;
    return d;
  }
  const double pk = rho.p(rc.bell_index - 1);
  d.lambda = 2.0 * (1.0 - pk);
  d.entangled_weight = 1.0 - d.lambda;
  if (d.lambda <= 0.0) {
    // Pure Bell state: the separable factor carries zero weight.
    d.lambda = 0.0;
    d.entangled_weight = 1.0;
    d.separable = BDState{};
    return d;
  }
  std::array<double, 4> sep;
  for (int i = 0; i < 4; ++i) sep[i] = rho.p(i) / d.lambda;
  sep[rc.bell_index - 1] = 0.5;
  d.separable = bd_from_probs(sep);
  return d;
}

double residual_check(const BDState& rho, const LSDecomposition& d) {
  const int k = d.entangled_index - 1;
  for (int i = 0; i < 4; ++i) {
    const double recombined =
        d.lambda * d.separable.p(i) + (i == k ? d.entangled_weight : 0.0);
    if (std::abs(recombined - rho.p(i)) > 1e-9)
      raise(Errc::mismatch, "decomposition does not recombine to rho at component " +
                                std::to_string(i + 1));
  }
  if (d.lambda >= 1.0 - 1e-12) return 0.0;

  const linalg::CMat residual =
      (1.0 / (1.0 - d.lambda)) *
      (density_matrix(rho) - d.lambda * density_matrix(d.separable));
  const std::vector<double> ev = linalg::eig_herm(residual);  // ascending
  return ev[ev.size() - 2];
}

}  // namespace bdconvex
