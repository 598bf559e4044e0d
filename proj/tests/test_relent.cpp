#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "bdconvex/error.hpp"
#include "bdconvex/lsd.hpp"
#include "bdconvex/relent.hpp"
#include "testutil.hpp"

using namespace bdconvex;
using linalg::Mat;

namespace {

// frozen oracle values (binary-entropy arithmetic for p1 = 0.7)
constexpr double kRee07 = 0.1257693834979822;      // 0.5 log2(25/21)
constexpr double kProfile03 = 0.4889569685345792;  // 0.3 log2(3/7) + 0.7 log2(7/3)

EntropyProblem bd_problem(const BDState& rho, double b1) {
  EntropyProblem prob;
  prob.q.assign(rho.probs().begin(), rho.probs().end());
  prob.a = Mat(1, 4);
  prob.a(0, 0) = 1.0;
  prob.b = {b1};
  return prob;
}

}  // namespace

TEST_CASE("shannon entropy") {
  CHECK(shannon_entropy(Vec{1, 0, 0, 0}) == 0.0);
  CHECK(shannon_entropy(Vec{0.25, 0.25, 0.25, 0.25}) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(shannon_entropy(Vec{0.5, 0.5, 0, 0}) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(shannon_entropy(Vec{0.5, 0.2}), Error);
}

TEST_CASE("relative entropy values and conventions") {
  const Vec q = {0.7, 0.1, 0.1, 0.1};
  CHECK(relative_entropy(q, q) == 0.0);

  const Vec w = {0.5, 1.0 / 6, 1.0 / 6, 1.0 / 6};
  CHECK(relative_entropy(w, q) == doctest::Approx(kRee07).epsilon(1e-13));

  // asymmetric in its arguments
  CHECK(relative_entropy(q, w) != relative_entropy(w, q));

  // weight outside the support of q gives the infinite sentinel
  CHECK(std::isinf(relative_entropy(Vec{0.5, 0.5, 0, 0}, Vec{1, 0, 0, 0})));

  CHECK_THROWS_AS(relative_entropy(Vec{0.5, 0.6, 0, 0}, q), Error);
  CHECK_THROWS_AS(relative_entropy(Vec{0.5, 0.5}, q), Error);
}

TEST_CASE("gibbs inequality on random pairs") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 2000; ++trial) {
    const auto w = testutil::random_simplex(rng);
    auto q = testutil::random_simplex(rng);
    for (double& v : q) v = std::max(v, 1e-12);
    double sum = q[0] + q[1] + q[2] + q[3];
    for (double& v : q) v /= sum;
    const double kl = relative_entropy(w, q);
    CHECK(kl >= -1e-14);
  }
  // equality only at equal arguments
  const Vec q = {0.4, 0.3, 0.2, 0.1};
  CHECK(relative_entropy(q, q) == 0.0);
  CHECK(relative_entropy(Vec{0.41, 0.29, 0.2, 0.1}, q) > 0.0);
}

TEST_CASE("slater condition for the mean-constrained simplex") {
  const BDState rho = bd_from_probs({0.7, 0.1, 0.1, 0.1});
  CHECK(slater_check(bd_problem(rho, 0.4)));
  CHECK(slater_check(bd_problem(rho, 0.5)));
  CHECK_FALSE(slater_check(bd_problem(rho, 0.0)));   // forces w1 = 0
  CHECK_FALSE(slater_check(bd_problem(rho, 1.5)));   // infeasible outright
}

TEST_CASE("constrained minimization by the dual newton iteration") {
  const BDState rho = bd_from_probs({0.7, 0.1, 0.1, 0.1});

  const MinEntropyResult half = min_relative_entropy(bd_problem(rho, 0.5));
  const std::array<double, 4> expect_half = {0.5, 1.0 / 6, 1.0 / 6, 1.0 / 6};
  for (int i = 0; i < 4; ++i) CHECK(std::abs(half.w_star[i] - expect_half[i]) <= 1e-10);
  CHECK(half.value_bits == doctest::Approx(kRee07).epsilon(1e-10));
  CHECK(half.y_star[0] == doctest::Approx(std::log(0.7 / 0.3)).epsilon(1e-10));

  const MinEntropyResult third = min_relative_entropy(bd_problem(rho, 0.3));
  const std::array<double, 4> expect_third = {0.3, 7.0 / 30, 7.0 / 30, 7.0 / 30};
  for (int i = 0; i < 4; ++i) CHECK(std::abs(third.w_star[i] - expect_third[i]) <= 1e-10);

  // no constraints: the prior minimizes
  EntropyProblem unconstrained;
  unconstrained.q = {0.7, 0.1, 0.1, 0.1};
  unconstrained.a = Mat(0, 4);
  const MinEntropyResult free = min_relative_entropy(unconstrained);
  CHECK(free.value_bits == 0.0);
  for (int i = 0; i < 4; ++i) CHECK(free.w_star[i] == unconstrained.q[i]);

  try {
    min_relative_entropy(bd_problem(rho, 0.0));
    FAIL("expected no_slater_point");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::no_slater_point);
  }
}

TEST_CASE("newton solution reproduces the scaled closed form") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 1000; ++trial) {
    const BDState rho = testutil::random_entangled(rng);
    const int k = dominant_index(rho) - 1;
    EntropyProblem prob;
    prob.q.assign(rho.probs().begin(), rho.probs().end());
    prob.a = Mat(1, 4);
    prob.a(0, k) = 1.0;
    prob.b = {0.5};
    const MinEntropyResult opt = min_relative_entropy(prob);
    const double pk = rho.p(k);
    for (int i = 0; i < 4; ++i) {
      const double expect = (i == k) ? 0.5 : rho.p(i) * 0.5 / (1.0 - pk);
      CHECK(std::abs(opt.w_star[i] - expect) <= 1e-8);
    }
  }
}

TEST_CASE("profile of the constrained minimum") {
  const BDState rho = bd_from_probs({0.7, 0.1, 0.1, 0.1});
  CHECK(ree_profile(rho, 0.5) == doctest::Approx(kRee07).epsilon(1e-13));
  CHECK(ree_profile(rho, 0.3) == doctest::Approx(kProfile03).epsilon(1e-13));
  // the formula vanishes in the (out-of-domain) limit b1 -> p1
  CHECK(ree_profile(rho, 0.7) == doctest::Approx(0.0).epsilon(1e-14));

  CHECK_THROWS_AS(ree_profile(rho, 0.0), Error);
  CHECK_THROWS_AS(ree_profile(rho, 1.0), Error);
  CHECK_THROWS_AS(ree_profile(BDState{}, 0.4), Error);

  // strictly above the boundary value on (0, 1/2), with a negative slope
  // witness log(b1 (1-p1) / (p1 (1-b1))) < 0 throughout
  for (int k = 1; k <= 9; ++k) {
    const double b1 = 0.05 * k;
    CHECK(ree_profile(rho, b1) > ree_profile(rho, 0.5));
    CHECK(std::log(b1 * 0.3 / (0.7 * (1.0 - b1))) < 0.0);
  }
}

TEST_CASE("closed-form relative entropy of entanglement") {
  const REEResult r = ree_bd(bd_from_probs({0.7, 0.1, 0.1, 0.1}));
  CHECK(r.value_bits == doctest::Approx(kRee07).epsilon(1e-12));
  CHECK(r.concurrence == doctest::Approx(0.4).epsilon(1e-15));
  CHECK_FALSE(r.infinite);
  const std::array<double, 4> closest = {0.5, 1.0 / 6, 1.0 / 6, 1.0 / 6};
  for (int i = 0; i < 4; ++i) CHECK(std::abs(r.closest.p(i) - closest[i]) <= 1e-15);
  CHECK(r.multiplier == doctest::Approx(std::log(0.7 / 0.3)).epsilon(1e-13));
  // agreement with the one-parameter profile at the boundary
  CHECK(std::abs(r.value_bits - ree_profile(bd_from_probs({0.7, 0.1, 0.1, 0.1}), 0.5)) <= 1e-12);
  // and with the concurrence closed form
  CHECK(std::abs(r.value_bits + 0.5 * std::log2(1.0 - 0.4 * 0.4)) <= 1e-9);

  const REEResult mixed = ree_bd(BDState{});
  CHECK(mixed.value_bits == 0.0);
  CHECK(mixed.concurrence == 0.0);
  for (int i = 0; i < 4; ++i) CHECK(mixed.closest.p(i) == 0.25);

  // boundary states are already separable
  const REEResult boundary = ree_bd(bd_from_probs({0.5, 1.0 / 6, 1.0 / 6, 1.0 / 6}));
  CHECK(boundary.value_bits == 0.0);

  const REEResult pure = ree_bd(bd_from_probs({1, 0, 0, 0}));
  CHECK(pure.infinite);
  CHECK(std::isinf(pure.value_bits));
  CHECK(pure.concurrence == 1.0);
  CHECK(pure.closest.p(0) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("closest separable state coincides with the optimal decomposition") {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 1000; ++trial) {
    const BDState rho = testutil::random_entangled(rng);
    const REEResult ree = ree_bd(rho);
    const LSDecomposition lsd = optimal_lsd(rho);
    for (int i = 0; i < 4; ++i)
      CHECK(std::abs(ree.closest.p(i) - lsd.separable.p(i)) <= 1e-12);
  }
}

TEST_CASE("kkt certificate at the entropy optimum") {
  const BDState rho = bd_from_probs({0.7, 0.1, 0.1, 0.1});
  const KKTReport rep = ree_kkt_report(rho, 1e-9);
  CHECK(rep.all());
  CHECK(rep.max_violation <= 1e-9);

  // shifting weight between unconstrained components keeps feasibility but
  // breaks stationarity
  const MinEntropyResult opt = min_relative_entropy(bd_problem(rho, 0.5));
  Vec perturbed = opt.w_star;
  perturbed[1] += 1e-2;
  perturbed[2] -= 1e-2;

  const Vec q = {0.7, 0.1, 0.1, 0.1};
  Differentiable objective{
      [q](std::span<const double> w) {
        double s = 0.0;
        for (size_t j = 0; j < w.size(); ++j)
          if (w[j] > 0.0) s += w[j] * std::log(w[j] / q[j]);
        return s;
      },
      [q](std::span<const double> w) {
        Vec g(w.size());
        for (size_t j = 0; j < w.size(); ++j) g[j] = std::log(w[j] / q[j]) + 1.0;
        return g;
      }};
  std::vector<Differentiable> equalities;
  equalities.push_back({[](std::span<const double> w) {
                          return w[0] + w[1] + w[2] + w[3] - 1.0;
                        },
                        [](std::span<const double> w) { return Vec(w.size(), 1.0); }});
  equalities.push_back({[](std::span<const double> w) { return w[0] - 0.5; },
                        [](std::span<const double> w) {
                          Vec g(w.size(), 0.0);
                          g[0] = 1.0;
                          return g;
                        }});
  const Vec zeta = {opt.zeta_star, opt.y_star[0]};
  const KKTReport bad = check_kkt(objective, equalities, {}, perturbed, zeta, {}, 1e-9);
  CHECK(bad.primal_feasible_eq);
  CHECK_FALSE(bad.stationary);
  CHECK(bad.max_violation > 1e-3);
}

TEST_CASE("entropy problem validation") {
  EntropyProblem bad;
  bad.q = {0.7, 0.1, 0.1, 0.1};
  bad.a = Mat(1, 3);  // wrong width
  bad.b = {0.5};
  CHECK_THROWS_AS(min_relative_entropy(bad), Error);

  EntropyProblem zeros;
  zeros.q = {0.7, 0.3, 0.0, 0.0};  // prior must be strictly positive
  zeros.a = Mat(0, 4);
  CHECK_THROWS_AS(min_relative_entropy(zeros), Error);
}
