#include "bdconvex/bdstate.hpp"

#include <cmath>

#include "json.hpp"

#include "bdconvex/error.hpp"

namespace bdconvex {

using linalg::CMat;
using linalg::cplx;

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::negative_probability: return "NegativeProbability";
    case Errc::not_normalized: return "NotNormalized";
    case Errc::outside_tetrahedron: return "OutsideTetrahedron";
    case Errc::not_hermitian: return "NotHermitian";
    case Errc::not_entangled: return "NotEntangled";
    case Errc::not_separable: return "NotSeparable";
    case Errc::mismatch: return "Mismatch";
    case Errc::not_distribution: return "NotDistribution";
    case Errc::no_slater_point: return "NoSlaterPoint";
    case Errc::newton_divergence: return "NewtonDivergence";
    case Errc::out_of_range: return "OutOfRange";
    case Errc::step_out_of_range: return "StepOutOfRange";
    case Errc::dimension_mismatch: return "DimensionMismatch";
    case Errc::infeasible: return "Infeasible";
    case Errc::unbounded: return "Unbounded";
    case Errc::max_iterations: return "MaxIterations";
    case Errc::not_feasible: return "NotFeasible";
    case Errc::parse_error: return "ParseError";
  }
  return "Unknown";
}

BDState bd_from_probs(const std::array<double, 4>& p) {
  std::array<double, 4> q = p;
  double sum = 0.0;
  for (int i = 0; i < 4; ++i) {
    if (q[i] < -kNegativeClampTol)
      raise(Errc::negative_probability, "p[" + std::to_string(i) + "] = " + std::to_string(q[i]));
    if (q[i] < 0.0) q[i] = 0.0;  // round-off from upstream solvers
    sum += q[i];
  }
  if (!(std::abs(sum - 1.0) <= kNormalizationTol))
    raise(Errc::not_normalized, "sum p = " + std::to_string(sum));
  for (double& v : q) v /= sum;
  return BDState(q);
}

TVector probs_to_tvec(const BDState& s) {
  const auto& p = s.probs();
  return TVector{p[0] - p[1] + p[2] - p[3],
                 -p[0] + p[1] + p[2] - p[3],
                 p[0] + p[1] - p[2] - p[3]};
}

BDState tvec_to_probs(const TVector& t) {
  // Each positivity form equals 4 p_i.
  const std::array<double, 4> forms = {1 + t.t1 - t.t2 + t.t3, 1 - t.t1 + t.t2 + t.t3,
                                       1 + t.t1 + t.t2 - t.t3, 1 - t.t1 - t.t2 - t.t3};
  std::array<double, 4> p;
  for (int i = 0; i < 4; ++i) {
    if (forms[i] < -kBoundaryBand)
      raise(Errc::outside_tetrahedron, "positivity form " + std::to_string(i + 1) + " = " +
                                           std::to_string(forms[i]));
    p[i] = forms[i] / 4.0;
  }
  return bd_from_probs(p);
}

namespace {

// sigma_i (x) sigma_i for i = 1..3; all three are real in this basis.
CMat pauli_corr(int i) {
  CMat m(4);
  switch (i) {
    case 1:  // X (x) X
      m(0, 3) = m(1, 2) = m(2, 1) = m(3, 0) = 1.0;
      break;
    case 2:  // Y (x) Y
      m(0, 3) = m(3, 0) = -1.0;
      m(1, 2) = m(2, 1) = 1.0;
      break;
    default:  // Z (x) Z
      m(0, 0) = m(3, 3) = 1.0;
      m(1, 1) = m(2, 2) = -1.0;
      break;
  }
  return m;
}

}  // namespace

DensityMatrix4 density_matrix(const BDState& s) {
  const TVector t = probs_to_tvec(s);
  CMat rho = linalg::cmat_identity(4);
  const double tv[3] = {t.t1, t.t2, t.t3};
  for (int i = 0; i < 3; ++i) rho = rho + tv[i] * pauli_corr(i + 1);
  return 0.25 * rho;
}

DensityMatrix4 bell_projector(int k) {
  if (k < 1 || k > 4) raise(Errc::out_of_range, "bell index " + std::to_string(k));
  static const double kAmp[4][4] = {{1, 0, 0, 1}, {1, 0, 0, -1}, {0, 1, 1, 0}, {0, 1, -1, 0}};
  CMat m(4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) m(i, j) = 0.5 * kAmp[k - 1][i] * kAmp[k - 1][j];
  return m;
}

RegionClass classify(const BDState& s) {
  const int k = dominant_index(s);
  const double pmax = s.p(k - 1);
  RegionClass rc;
  rc.bell_index = k;
  if (pmax > 0.5 + kBoundaryBand)
    rc.region = Region::entangled;
  else if (pmax >= 0.5 - kBoundaryBand)
    rc.region = Region::separable_boundary;
  else
    rc.region = Region::separable_interior;
  return rc;
}

double concurrence(const BDState& s) {
  const double pmax = s.p(dominant_index(s) - 1);
  return std::max(0.0, 2.0 * pmax - 1.0);
}

DensityMatrix4 partial_transpose(const DensityMatrix4& m) {
  // Transpose the second-qubit indices: out[(i,a),(j,b)] = in[(i,b),(j,a)].
  CMat out(4);
  for (int i = 0; i < 2; ++i)
    for (int a = 0; a < 2; ++a)
      for (int j = 0; j < 2; ++j)
        for (int b = 0; b < 2; ++b) out(2 * i + a, 2 * j + b) = m(2 * i + b, 2 * j + a);
  return out;
}

double ppt_min_eigenvalue(const DensityMatrix4& m) {
  if (linalg::herm_defect(m) > 1e-12) raise(Errc::not_hermitian, "density matrix");
  const std::vector<double> ev = linalg::eig_herm(partial_transpose(m));
  return ev.front();
}

int dominant_index(const BDState& s) {
  int k = 0;
  for (int i = 1; i < 4; ++i)
    if (s.p(i) > s.p(k)) k = i;
  return k + 1;
}

BDState bd_state_from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    raise(Errc::parse_error, e.what());
  }
  if (!doc.is_object()) raise(Errc::parse_error, "state must be a JSON object");
  const bool has_p = doc.contains("p"), has_t = doc.contains("t");
  if (has_p == has_t) raise(Errc::parse_error, "state needs exactly one of \"p\" or \"t\"");
  try {
    if (has_p) {
      const auto& arr = doc["p"];
      if (!arr.is_array() || arr.size() != 4)
        raise(Errc::parse_error, "\"p\" must be an array of 4 numbers");
      std::array<double, 4> p;
      for (int i = 0; i < 4; ++i) p[i] = arr[i].get<double>();
      return bd_from_probs(p);
    }
    const auto& arr = doc["t"];
    if (!arr.is_array() || arr.size() != 3)
      raise(Errc::parse_error, "\"t\" must be an array of 3 numbers");
    return tvec_to_probs(TVector{arr[0].get<double>(), arr[1].get<double>(), arr[2].get<double>()});
  } catch (const nlohmann::json::exception& e) {
    raise(Errc::parse_error, e.what());
  }
}

}  // namespace bdconvex
