#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "bdconvex/bdstate.hpp"
#include "bdconvex/error.hpp"
#include "testutil.hpp"

using namespace bdconvex;

namespace {

bool probs_near(const BDState& s, const std::array<double, 4>& expect, double tol) {
  for (int i = 0; i < 4; ++i)
    if (std::abs(s.p(i) - expect[i]) > tol) return false;
  return true;
}

}  // namespace

TEST_CASE("bd_from_probs validation and clamping") {
  CHECK_NOTHROW(bd_from_probs({0.7, 0.1, 0.1, 0.1}));
  CHECK_NOTHROW(bd_from_probs({0.25, 0.25, 0.25, 0.25}));

  CHECK_THROWS_WITH_AS(bd_from_probs({0.7, 0.2, 0.2, 0.1}), doctest::Contains("NotNormalized"),
                       Error);
  CHECK_THROWS_AS(bd_from_probs({-0.1, 0.5, 0.3, 0.3}), Error);
  try {
    bd_from_probs({-0.1, 0.5, 0.3, 0.3});
  } catch (const Error& e) {
    CHECK(e.code() == Errc::negative_probability);
  }

  // round-off negatives are clamped and renormalized
  const BDState s = bd_from_probs({-5e-13, 0.5, 0.25, 0.25 + 5e-13});
  CHECK(s.p(0) == 0.0);
  double sum = 0.0;
  for (int i = 0; i < 4; ++i) sum += s.p(i);
  CHECK(std::abs(sum - 1.0) < 1e-15);
}

TEST_CASE("probability to correlation map") {
  const TVector t = probs_to_tvec(bd_from_probs({0.7, 0.1, 0.1, 0.1}));
  CHECK(t.t1 == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(t.t2 == doctest::Approx(-0.6).epsilon(1e-15));
  CHECK(t.t3 == doctest::Approx(0.6).epsilon(1e-15));

  const TVector center = probs_to_tvec(BDState{});
  CHECK(center.t1 == 0.0);
  CHECK(center.t2 == 0.0);
  CHECK(center.t3 == 0.0);

  const TVector vertex = probs_to_tvec(bd_from_probs({1, 0, 0, 0}));
  CHECK(vertex.t1 == 1.0);
  CHECK(vertex.t2 == -1.0);
  CHECK(vertex.t3 == 1.0);
}

TEST_CASE("correlation to probability map") {
  CHECK(probs_near(tvec_to_probs({0, 0, 0}), {0.25, 0.25, 0.25, 0.25}, 1e-15));
  // hand-inverted linear system
  CHECK(probs_near(tvec_to_probs({0.6, -0.6, 0.6}), {0.7, 0.1, 0.1, 0.1}, 1e-15));
  CHECK_THROWS_AS(tvec_to_probs({1, 1, 1}), Error);
  try {
    tvec_to_probs({1, 1, 1});
  } catch (const Error& e) {
    CHECK(e.code() == Errc::outside_tetrahedron);
  }
}

TEST_CASE("round trip p -> t -> p is the identity") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 10000; ++trial) {
    const BDState s = testutil::random_state(rng);
    const BDState back = tvec_to_probs(probs_to_tvec(s));
    for (int i = 0; i < 4; ++i) CHECK(std::abs(back.p(i) - s.p(i)) <= 1e-14);
  }
}

TEST_CASE("density matrix of the maximally mixed and pure Bell states") {
  const DensityMatrix4 mixed = density_matrix(BDState{});
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      CHECK(std::abs(mixed(i, j) - (i == j ? 0.25 : 0.0)) < 1e-15);

  const DensityMatrix4 phi_plus = density_matrix(bd_from_probs({1, 0, 0, 0}));
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      const double expect = ((i == 0 || i == 3) && (j == 0 || j == 3)) ? 0.5 : 0.0;
      CHECK(std::abs(phi_plus(i, j) - expect) < 1e-15);
    }
}

TEST_CASE("density matrix equals the Bell projector mixture") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 1000; ++trial) {
    const BDState s = testutil::random_state(rng);
    const DensityMatrix4 via_pauli = density_matrix(s);
    linalg::CMat via_projectors(4);
    for (int k = 1; k <= 4; ++k)
      via_projectors = via_projectors + s.p(k - 1) * bell_projector(k);
    CHECK(linalg::max_abs(via_pauli - via_projectors) <= 1e-14);
  }
  // diagonal in the Bell basis: projector-weighted traces recover the probs
  const BDState s = bd_from_probs({0.7, 0.1, 0.1, 0.1});
  const DensityMatrix4 rho = density_matrix(s);
  for (int k = 1; k <= 4; ++k)
    CHECK(linalg::re_trace_prod(rho, bell_projector(k)) ==
          doctest::Approx(s.p(k - 1)).epsilon(1e-14));
}

TEST_CASE("region classification") {
  CHECK(classify(bd_from_probs({0.7, 0.1, 0.1, 0.1})).region == Region::entangled);
  CHECK(classify(bd_from_probs({0.7, 0.1, 0.1, 0.1})).bell_index == 1);
  CHECK(classify(bd_from_probs({0.1, 0.1, 0.7, 0.1})).bell_index == 3);

  const BDState boundary = bd_from_probs({0.5, 1.0 / 6, 1.0 / 6, 1.0 / 6});
  CHECK(classify(boundary).region == Region::separable_boundary);

  CHECK(classify(BDState{}).region == Region::separable_interior);
}

TEST_CASE("concurrence") {
  CHECK(concurrence(bd_from_probs({0.7, 0.1, 0.1, 0.1})) == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(concurrence(BDState{}) == 0.0);
  CHECK(concurrence(bd_from_probs({1, 0, 0, 0})) == 1.0);

  // invariant under relabeling of the Bell cells
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 200; ++trial) {
    std::array<double, 4> p = testutil::random_simplex(rng);
    const double base = concurrence(bd_from_probs(p));
    std::array<int, 4> perm = {0, 1, 2, 3};
    std::shuffle(perm.begin(), perm.end(), rng);
    std::array<double, 4> q;
    for (int i = 0; i < 4; ++i) q[i] = p[perm[i]];
    CHECK(concurrence(bd_from_probs(q)) == doctest::Approx(base).epsilon(1e-15));
  }
}

TEST_CASE("partial transpose minimum eigenvalue") {
  CHECK(ppt_min_eigenvalue(density_matrix(BDState{})) == doctest::Approx(0.25).epsilon(1e-13));
  // Bell projector: partial transpose swaps the coherence onto a -1/2 mode
  CHECK(ppt_min_eigenvalue(density_matrix(bd_from_probs({1, 0, 0, 0}))) ==
        doctest::Approx(-0.5).epsilon(1e-13));
  CHECK(std::abs(ppt_min_eigenvalue(
            density_matrix(bd_from_probs({0.5, 1.0 / 6, 1.0 / 6, 1.0 / 6})))) <= 1e-12);

  linalg::CMat not_herm(4);
  not_herm(0, 1) = 1.0;
  CHECK_THROWS_AS(ppt_min_eigenvalue(not_herm), Error);
}

TEST_CASE("octahedron membership predicates agree") {
  std::mt19937_64 rng(14);
  int separable_seen = 0;
  for (int trial = 0; trial < 100000; ++trial) {
    const BDState s = testutil::random_state(rng);
    const TVector t = probs_to_tvec(s);

    bool by_probs = true;
    for (int i = 0; i < 4; ++i) by_probs = by_probs && s.p(i) <= 0.5 + 1e-12;

    bool by_inequalities = true;
    for (int s1 = -1; s1 <= 1; s1 += 2)
      for (int s2 = -1; s2 <= 1; s2 += 2)
        for (int s3 = -1; s3 <= 1; s3 += 2)
          by_inequalities =
              by_inequalities && (1.0 + s1 * t.t1 + s2 * t.t2 + s3 * t.t3 >= -1e-12);

    const bool by_l1 = std::abs(t.t1) + std::abs(t.t2) + std::abs(t.t3) <= 1.0 + 1e-12;

    REQUIRE(by_probs == by_inequalities);
    REQUIRE(by_probs == by_l1);
    separable_seen += by_probs;
  }
  CHECK(separable_seen > 0);
  CHECK(separable_seen < 100000);
}

TEST_CASE("ppt criterion agrees with the octahedron test") {
  std::mt19937_64 rng(15);
  for (int trial = 0; trial < 20000; ++trial) {
    const BDState s = testutil::random_state(rng);
    bool separable = true;
    for (int i = 0; i < 4; ++i) separable = separable && s.p(i) <= 0.5 + 1e-12;
    const bool ppt = ppt_min_eigenvalue(density_matrix(s)) >= -1e-10;
    REQUIRE(separable == ppt);
  }
}

TEST_CASE("octahedron vertices sit on the separable boundary") {
  for (const TVector& v : kOctahedronVertices) {
    const BDState s = tvec_to_probs(v);
    CHECK(classify(s).region == Region::separable_boundary);
    CHECK(std::abs(std::abs(v.t1) + std::abs(v.t2) + std::abs(v.t3) - 1.0) < 1e-15);
  }
}

TEST_CASE("state json parsing") {
  const BDState p_form = bd_state_from_json(R"({"p": [0.7, 0.1, 0.1, 0.1]})");
  CHECK(p_form.p(0) == doctest::Approx(0.7).epsilon(1e-15));
  const BDState t_form = bd_state_from_json(R"({"t": [0.6, -0.6, 0.6]})");
  CHECK(probs_near(t_form, {0.7, 0.1, 0.1, 0.1}, 1e-14));

  auto code_of = [](const char* text) {
    try {
      bd_state_from_json(text);
    } catch (const Error& e) {
      return e.code();
    }
    return Errc::parse_error;  // unreachable for these inputs
  };
  CHECK(code_of(R"({"p": [0.7, 0.1, 0.1]})") == Errc::parse_error);
  CHECK(code_of(R"({"p": [1,0,0,0], "t": [0,0,0]})") == Errc::parse_error);
  CHECK(code_of(R"({})") == Errc::parse_error);
  CHECK(code_of("not json") == Errc::parse_error);
  CHECK(code_of(R"({"p": [0.7, 0.2, 0.2, 0.1]})") == Errc::not_normalized);
}
