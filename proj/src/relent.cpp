#include "bdconvex/relent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bdconvex/error.hpp"

namespace bdconvex {

using linalg::Mat;

namespace {

constexpr double kLn2 = 0.6931471805599453;

void require_distribution(std::span<const double> w) {
  double sum = 0.0;
  for (double v : w) {
    if (!(v >= -1e-12)) raise(Errc::not_distribution, "negative weight");
    sum += v;
  }
  if (!(std::abs(sum - 1.0) <= 1e-9)) raise(Errc::not_distribution, "weights do not sum to 1");
}

void validate_problem(const EntropyProblem& prob) {
  const int k = static_cast<int>(prob.q.size());
  if (prob.a.rows != static_cast<int>(prob.b.size()) || (prob.a.rows > 0 && prob.a.cols != k))
    raise(Errc::dimension_mismatch, "constraint shapes");
  double sum = 0.0;
  for (double v : prob.q) {
    if (!(v > 0.0)) raise(Errc::not_distribution, "prior must be strictly positive");
    sum += v;
  }
  if (!(std::abs(sum - 1.0) <= 1e-9)) raise(Errc::not_distribution, "prior does not sum to 1");
}

}  // namespace

double shannon_entropy(std::span<const double> w) {
  require_distribution(w);
  double s = 0.0;
  for (double v : w)
    if (v > 0.0) s -= v * std::log(v);
  return s / kLn2;
}

double relative_entropy(std::span<const double> w, std::span<const double> q) {
  if (w.size() != q.size()) raise(Errc::dimension_mismatch, "length mismatch");
  require_distribution(w);
  double s = 0.0;
  for (size_t i = 0; i < w.size(); ++i) {
    if (w[i] <= 0.0) continue;  // 0 log 0 = 0
    if (q[i] <= 0.0) return std::numeric_limits<double>::infinity();
    s += w[i] * std::log(w[i] / q[i]);
  }
  return s / kLn2;
}

bool slater_check(const EntropyProblem& prob) {
  validate_problem(prob);
  const int k = static_cast<int>(prob.q.size());
  const int d = prob.a.rows;

  // Maximize the margin mu with w = s + mu 1, s >= 0, mu >= 0.
  Mat a(d + 1, k + 1);
  Vec b(d + 1, 0.0), c(k + 1, 0.0);
  for (int j = 0; j < k; ++j) a(0, j) = 1.0;
  a(0, k) = static_cast<double>(k);
  b[0] = 1.0;
  for (int i = 0; i < d; ++i) {
    double row_sum = 0.0;
    for (int j = 0; j < k; ++j) {
      a(i + 1, j) = prob.a(i, j);
      row_sum += prob.a(i, j);
    }
    a(i + 1, k) = row_sum;
    b[i + 1] = prob.b[i];
  }
  c[k] = -1.0;

  try {
    return solve_lp(c, a, b).x[k] > 1e-7;
  } catch (const Error& e) {
    if (e.code() == Errc::infeasible) return false;
    throw;
  }
}

MinEntropyResult min_relative_entropy(const EntropyProblem& prob) {
  validate_problem(prob);
  if (!slater_check(prob)) raise(Errc::no_slater_point, "no strictly positive feasible point");

  const int k = static_cast<int>(prob.q.size());
  const int d = prob.a.rows;

  MinEntropyResult out;
  if (d == 0) {
    out.w_star = prob.q;
    out.zeta_star = -1.0;  // stationarity of log(w/q) + 1 + zeta at w = q
    out.value_bits = 0.0;
    return out;
  }

  Vec y(d, 0.0), w(k), logq(k);
  for (int j = 0; j < k; ++j) logq[j] = std::log(prob.q[j]);

  // Dual objective phi(y) = -b.y - log sum_j q_j exp(-a_j.y); shift exponents
  // for overflow safety. Returns phi and fills w(y).
  double log_norm = 0.0;
  auto eval = [&](const Vec& yv) {
    double shift = -std::numeric_limits<double>::infinity();
    Vec expo(k);
    for (int j = 0; j < k; ++j) {
      double e = logq[j];
      for (int i = 0; i < d; ++i) e -= prob.a(i, j) * yv[i];
      expo[j] = e;
      shift = std::max(shift, e);
    }
    double s = 0.0;
    for (int j = 0; j < k; ++j) {
      w[j] = std::exp(expo[j] - shift);
      s += w[j];
    }
    for (int j = 0; j < k; ++j) w[j] /= s;
    log_norm = shift + std::log(s);
    double by = 0.0;
    for (int i = 0; i < d; ++i) by += prob.b[i] * yv[i];
    return -by - log_norm;
  };

  double phi = eval(y);
  for (int iter = 0; iter < 100; ++iter) {
    Vec resid(d, 0.0);  // A w - b, the ascent gradient
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < k; ++j) resid[i] += prob.a(i, j) * w[j];
      resid[i] -= prob.b[i];
    }
    double rmax = 0.0;
    for (double r : resid) rmax = std::max(rmax, std::abs(r));
    if (rmax < 1e-12) {
      out.y_star = y;
      out.w_star = w;
      out.zeta_star = log_norm - 1.0;
      out.value_bits = relative_entropy(w, prob.q);
      out.newton_iterations = iter;
      return out;
    }

    Mat h(d, d);  // A (diag w - w w^T) A^T
    for (int i = 0; i < d; ++i) {
      for (int l = i; l < d; ++l) {
        double aw_i = 0.0, aw_l = 0.0, s = 0.0;
        for (int j = 0; j < k; ++j) {
          s += prob.a(i, j) * w[j] * prob.a(l, j);
          aw_i += prob.a(i, j) * w[j];
          aw_l += prob.a(l, j) * w[j];
        }
        h(i, l) = h(l, i) = s - aw_i * aw_l;
      }
    }
    Vec step;
    if (!linalg::solve_lin(h, resid, step))
      raise(Errc::newton_divergence, "singular dual Hessian");

    double ascent = 0.0;  // squared Newton decrement
    for (int i = 0; i < d; ++i) ascent += resid[i] * step[i];
    if (ascent <= 1e-9) {
      // Quadratic zone: take the pure Newton step. The damped test would
      // demand a phi improvement below the resolution of phi itself here.
      for (int i = 0; i < d; ++i) y[i] += step[i];
      phi = eval(y);
      continue;
    }
    double alpha = 1.0;
    bool accepted = false;
    Vec ytry(d);
    for (int half = 0; half < 30; ++half, alpha *= 0.5) {
      for (int i = 0; i < d; ++i) ytry[i] = y[i] + alpha * step[i];
      const double phi_try = eval(ytry);
      if (phi_try >= phi + 0.25 * alpha * ascent) {
        y = ytry;
        phi = phi_try;
        accepted = true;
        break;
      }
    }
    if (!accepted) raise(Errc::newton_divergence, "line search stalled");
  }
  raise(Errc::newton_divergence, "no convergence in 100 iterations");
}

double ree_profile(const BDState& rho, double b1) {
  if (classify(rho).region != Region::entangled)
    raise(Errc::not_entangled, "profile needs an entangled state");
  if (!(b1 > 0.0 && b1 < 1.0)) raise(Errc::out_of_range, "b1 must lie in (0, 1)");
  const double p = rho.p(dominant_index(rho) - 1);
  return b1 * std::log2(b1 / p) + (1.0 - b1) * std::log2((1.0 - b1) / (1.0 - p));
}

REEResult ree_bd(const BDState& rho) {
  const RegionClass rc = classify(rho);
  REEResult out;
  out.concurrence = concurrence(rho);
  if (rc.region != Region::entangled) {
    out.closest = rho;
    return out;
  }
  const int k = rc.bell_index - 1;
  const double p = rho.p(k);
  const double c = 2.0 * p - 1.0;
  out.concurrence = c;

  std::array<double, 4> closest;
  if (p >= 1.0) {
    // Pure Bell state: the minimum is infinite; report the boundary state
    // the formula tends to along the uniform direction.
    for (int i = 0; i < 4; ++i) closest[i] = 1.0 / 6.0;
    closest[k] = 0.5;
    out.closest = bd_from_probs(closest);
    out.value_bits = std::numeric_limits<double>::infinity();
    out.multiplier = std::numeric_limits<double>::infinity();
    out.infinite = true;
    return out;
  }
  for (int i = 0; i < 4; ++i) closest[i] = rho.p(i) / (2.0 * (1.0 - p));
  closest[k] = 0.5;
  out.closest = bd_from_probs(closest);
  out.value_bits = relative_entropy(out.closest.probs(), rho.probs());
  out.multiplier = std::log(p / (1.0 - p));
  return out;
}

KKTReport ree_kkt_report(const BDState& rho, double tol) {
  const RegionClass rc = classify(rho);
  if (rc.region != Region::entangled) raise(Errc::not_entangled, "KKT certificate");
  const int k = rc.bell_index - 1;

  EntropyProblem prob;
  prob.q.assign(rho.probs().begin(), rho.probs().end());
  prob.a = Mat(1, 4);
  prob.a(0, k) = 1.0;
  prob.b = {0.5};
  const MinEntropyResult opt = min_relative_entropy(prob);

  const Vec q = prob.q;
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
                          double s = -1.0;
                          for (double v : w) s += v;
                          return s;
                        },
                        [](std::span<const double> w) { return Vec(w.size(), 1.0); }});
  equalities.push_back({[k](std::span<const double> w) { return w[k] - 0.5; },
                        [k](std::span<const double> w) {
                          Vec g(w.size(), 0.0);
                          g[k] = 1.0;
                          return g;
                        }});

  std::vector<Differentiable> inequalities;
  for (int j = 0; j < 4; ++j)
    inequalities.push_back({[j](std::span<const double> w) { return -w[j]; },
                            [j](std::span<const double> w) {
                              Vec g(w.size(), 0.0);
                              g[j] = -1.0;
                              return g;
                            }});

  const Vec zeta = {opt.zeta_star, opt.y_star[0]};
  const Vec y(4, 0.0);  // interior optimum: the sign constraints are slack
  return check_kkt(objective, equalities, inequalities, opt.w_star, zeta, y, tol);
}

}  // namespace bdconvex
