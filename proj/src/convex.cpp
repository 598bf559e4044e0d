#include "bdconvex/convex.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <optional>

#include "json.hpp"

#include "bdconvex/error.hpp"
#include "bdconvex/jsonio.hpp"

namespace bdconvex {

using linalg::CMat;
using linalg::cplx;
using linalg::Mat;

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::optimal: return "Optimal";
    case SolveStatus::infeasible: return "Infeasible";
    case SolveStatus::unbounded: return "Unbounded";
    case SolveStatus::max_iterations: return "MaxIterations";
  }
  return "Unknown";
}

CMat SDPProblem::f_of(std::span<const double> x) const {
  CMat f = f0;
  for (size_t i = 0; i < fi.size(); ++i)
    for (size_t k = 0; k < f.a.size(); ++k) f.a[k] += x[i] * fi[i].a[k];
  return f;
}

namespace {

constexpr int kNewtonBudget = 200;      // total Newton steps per solve
constexpr double kUnboundedNorm = 1e8;  // |x| beyond this means an unbounded ray
// Centering tolerances on |grad phi_t| / t: a loose one along the path and a
// tight final polish that makes Z dual feasible to certificate precision.
constexpr double kPathGradTol = 1e-9;
constexpr double kPolishGradTol = 1e-11;

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double inf_norm(const Vec& v) {
  double s = 0.0;
  for (double x : v) s = std::max(s, std::abs(x));
  return s;
}

void validate_problem(const SDPProblem& p) {
  const int n = static_cast<int>(p.c.size());
  const int m = p.f0.n;
  if (static_cast<int>(p.fi.size()) != n)
    raise(Errc::dimension_mismatch, "c has " + std::to_string(n) + " entries but " +
                                        std::to_string(p.fi.size()) + " constraint matrices given");
  if (n > 8 || m > 16) raise(Errc::dimension_mismatch, "desk scale is n <= 8, m <= 16");
  if (linalg::herm_defect(p.f0) > 1e-13) raise(Errc::not_hermitian, "F0");
  for (int i = 0; i < n; ++i) {
    if (p.fi[i].n != m) raise(Errc::dimension_mismatch, "F" + std::to_string(i + 1));
    if (linalg::herm_defect(p.fi[i]) > 1e-13) raise(Errc::not_hermitian, "F" + std::to_string(i + 1));
  }
}

struct PathResult {
  SolveStatus status = SolveStatus::max_iterations;
  Vec x;
  CMat z;
  int newton_steps = 0;
  bool stopped_early = false;
  std::vector<std::pair<double, double>> trace;
};

// Exact dual certificate on the active eigenspace of F(x): Z = U M U^H with
// tr(F_i Z) = c_i solved least-norm over Hermitian M. Accepted only when the
// result is PSD, feasible to ~1e-11, and an actual lower bound no worse than
// the central one, so the caller can trust it unconditionally.
std::optional<CMat> round_dual(const SDPProblem& p, const Vec& x, double gap_budget) {
  const int n = static_cast<int>(p.c.size());
  const int m = p.f0.n;
  const CMat f = p.f_of(x);
  const double fscale = std::max(1.0, linalg::max_abs(f));
  const linalg::EigH eig = linalg::eig_herm_full(f);

  std::vector<int> active;
  for (int i = 0; i < m; ++i)
    if (eig.values[i] <= 1e-6 * fscale) active.push_back(i);
  const int r = static_cast<int>(active.size());
  if (r == 0 || r > 8) return std::nullopt;

  auto rank1 = [&](int a, int b) {  // u_a u_b^H over the active columns
    CMat z(m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        z(i, j) = eig.vectors(i, active[a]) * std::conj(eig.vectors(j, active[b]));
    return z;
  };

  // Hermitian basis of the active block: diagonal dyads plus the symmetric
  // and antisymmetric pairings of distinct columns.
  std::vector<CMat> basis;
  for (int a = 0; a < r; ++a) {
    basis.push_back(rank1(a, a));
    for (int b = a + 1; b < r; ++b) {
      const CMat ab = rank1(a, b), ba = rank1(b, a);
      basis.push_back(ab + ba);
      CMat imag_pair(m);
      for (size_t e = 0; e < imag_pair.a.size(); ++e)
        imag_pair.a[e] = cplx{0, 1} * (ab.a[e] - ba.a[e]);
      basis.push_back(std::move(imag_pair));
    }
  }

  const int kparams = static_cast<int>(basis.size());
  Mat lmap(n, kparams);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < kparams; ++k) lmap(i, k) = linalg::re_trace_prod(p.fi[i], basis[k]);

  // Least-norm parameters through the normal equations of the transpose.
  Mat llt(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < kparams; ++k) s += lmap(i, k) * lmap(j, k);
      llt(i, j) = llt(j, i) = s;
    }
  Vec w;
  if (!linalg::solve_lin(llt, p.c, w)) return std::nullopt;

  CMat z(m);
  for (int k = 0; k < kparams; ++k) {
    double theta = 0.0;
    for (int i = 0; i < n; ++i) theta += lmap(i, k) * w[i];
    for (size_t e = 0; e < z.a.size(); ++e) z.a[e] += theta * basis[k].a[e];
  }

  const double cscale = std::max(1.0, inf_norm(p.c));
  for (int i = 0; i < n; ++i)
    if (std::abs(linalg::re_trace_prod(p.fi[i], z) - p.c[i]) > 1e-11 * cscale)
      return std::nullopt;
  if (linalg::eig_herm(z).front() < -1e-12) return std::nullopt;
  const double gap = dot(p.c, x) + linalg::re_trace_prod(p.f0, z);
  if (gap < -1e-12 || gap > gap_budget) return std::nullopt;
  return z;
}

// Newton-centering barrier path from a strictly feasible x0. When stop_early
// is supplied it is tested after every accepted step and ends the path with
// the current iterate (used by phase I, which only needs interior slack).
PathResult barrier_path(const SDPProblem& p, Vec x0, double tol, int budget,
                        const std::function<bool(const Vec&)>& stop_early) {
  const int n = static_cast<int>(p.c.size());
  const int m = p.f0.n;
  const double cscale = std::max(1.0, inf_norm(p.c));

  PathResult out;
  out.x = std::move(x0);

  CMat f = p.f_of(out.x), chol;
  if (!linalg::cholesky(f, chol)) return out;  // caller guarantees interior; bail defensively
  CMat finv = linalg::chol_inverse_from_factor(chol);
  double logdet = linalg::chol_logdet(chol);

  std::vector<CMat> fm(n, CMat{});  // F^-1 F_i scratch
  double t = 1.0;

  enum class Centering { done, stalled, out_of_budget, unbounded, early_exit };
  double null_walk_scale = 1.0;
  auto center_at = [&](double tcur, double grad_tol) {
    for (int it = 0; it < 60; ++it) {
      Vec g(n);
      for (int i = 0; i < n; ++i) g[i] = tcur * p.c[i] - linalg::re_trace_prod(finv, p.fi[i]);
      if (inf_norm(g) <= grad_tol * tcur * cscale) return Centering::done;

      for (int i = 0; i < n; ++i) fm[i] = finv * p.fi[i];
      Mat h(n, n);
      double hscale = 0.0;
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
          h(i, j) = h(j, i) = linalg::re_trace_prod(fm[i], fm[j]);
          hscale = std::max(hscale, std::abs(h(i, j)));
        }
      Vec neg_g(n), d;
      for (int i = 0; i < n; ++i) neg_g[i] = -g[i];
      if (!linalg::solve_lin(h, neg_g, d)) {
        // Singular Hessian: directions with sum_i d_i F_i = 0 leave F(x)
        // unchanged and phi linear, so walk the steepest of them (with an
        // escalating stride); a consistent system means g lies in the range.
        const Mat ns = linalg::nullspace_basis(h, 1e-11 * std::max(1.0, hscale));
        int pick = -1;
        double steep = 1e-12 * tcur * cscale;
        for (int k = 0; k < ns.cols; ++k) {
          double gn = 0.0;
          for (int i = 0; i < n; ++i) gn += g[i] * ns(i, k);
          if (std::abs(gn) > steep) {
            steep = std::abs(gn);
            pick = k;
          }
        }
        if (pick >= 0) {
          double gn = 0.0;
          for (int i = 0; i < n; ++i) gn += g[i] * ns(i, pick);
          d.assign(n, 0.0);
          for (int i = 0; i < n; ++i)
            d[i] = (gn > 0 ? -1.0 : 1.0) * ns(i, pick) * null_walk_scale;
          null_walk_scale *= 2.0;
        } else if (!linalg::solve_consistent(h, neg_g, d, 1e-11 * std::max(1.0, hscale))) {
          return Centering::stalled;
        }
      }

      const double gd = dot(g, d);  // = -delta^2 <= 0
      const double delta2 = -gd;
      if (delta2 <= 1e-26) return Centering::done;

      const double phi0 = tcur * dot(p.c, out.x) - logdet;
      bool accepted = false;
      Vec xtry(n);
      double alpha = 1.0;
      for (int ls = 0; ls < 60; ++ls, alpha *= 0.5) {
        for (int i = 0; i < n; ++i) xtry[i] = out.x[i] + alpha * d[i];
        CMat ftry = p.f_of(xtry), ltry;
        if (!linalg::cholesky(ftry, ltry)) continue;
        const double logdet_try = linalg::chol_logdet(ltry);
        // Inside the quadratic zone the full step is always acceptable.
        if (delta2 >= 0.0625) {
          const double phi_try = tcur * dot(p.c, xtry) - logdet_try;
          if (!(phi_try <= phi0 + 0.1 * alpha * gd)) continue;
        }
        out.x = xtry;
        f = std::move(ftry);
        finv = linalg::chol_inverse_from_factor(ltry);
        logdet = logdet_try;
        accepted = true;
        break;
      }
      if (!accepted) return Centering::stalled;

      ++out.newton_steps;
      if (inf_norm(out.x) > kUnboundedNorm) return Centering::unbounded;
      if (out.newton_steps >= budget) return Centering::out_of_budget;
      if (stop_early && stop_early(out.x)) return Centering::early_exit;
      // At large t the Newton correction falls below the floating-point
      // granularity of x; that is the best computable center.
      double step_inf = 0.0;
      for (int i = 0; i < n; ++i) step_inf = std::max(step_inf, std::abs(alpha * d[i]));
      if (delta2 <= 1e-8 && step_inf <= 1e-15 * (1.0 + inf_norm(out.x)))
        return Centering::done;
    }
    return Centering::done;  // usable center; the polish pass re-tightens
  };

  while (true) {
    Centering c = center_at(t, kPathGradTol);
    if (c == Centering::done && static_cast<double>(m) / t < tol)
      c = center_at(t, kPolishGradTol);

    out.z = (1.0 / t) * finv;
    switch (c) {
      case Centering::unbounded:
        out.status = SolveStatus::unbounded;
        return out;
      case Centering::early_exit:
        out.status = SolveStatus::optimal;
        out.stopped_early = true;
        return out;
      case Centering::stalled:
      case Centering::out_of_budget:
        return out;  // status stays max_iterations, best iterate attached
      case Centering::done:
        break;
    }

    // Project the center's dual point onto the affine space tr(F_i Z) = c_i;
    // the finite-precision center leaves a residual that grows like t * ulp
    // and would otherwise leak into the certificates. The projection is kept
    // only while it preserves positive semidefiniteness, so every recorded
    // (primal, dual) pair is a genuinely feasible bracket.
    {
      Vec resid(n);
      for (int i = 0; i < n; ++i)
        resid[i] = p.c[i] - linalg::re_trace_prod(p.fi[i], out.z);
      Mat gram(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
          gram(i, j) = gram(j, i) = linalg::re_trace_prod(p.fi[i], p.fi[j]);
      Vec mu;
      if (linalg::solve_lin(gram, resid, mu)) {
        CMat z_exact = out.z;
        for (int k = 0; k < n; ++k)
          for (size_t e = 0; e < z_exact.a.size(); ++e) z_exact.a[e] += mu[k] * p.fi[k].a[e];
        if (linalg::eig_herm(z_exact).front() >= -1e-13) {
          out.z = std::move(z_exact);
          out.trace.emplace_back(dot(p.c, out.x), -linalg::re_trace_prod(p.f0, out.z));
        }
      }
    }

    if (stop_early && stop_early(out.x)) {
      out.status = SolveStatus::optimal;
      out.stopped_early = true;
      return out;
    }
    if (static_cast<double>(m) / t < tol) {
      // Prefer an exact dual on the active face of F(x); the certificate is
      // then limited only by the primal accuracy, not by the t * ulp floor
      // of the last center.
      if (std::optional<CMat> rounded = round_dual(p, out.x, tol)) {
        out.z = std::move(*rounded);
        out.trace.emplace_back(dot(p.c, out.x), -linalg::re_trace_prod(p.f0, out.z));
      }
      out.status = SolveStatus::optimal;
      return out;
    }
    t *= 10.0;
  }
}

double problem_scale(const SDPProblem& p) {
  double s = std::max(1.0, linalg::max_abs(p.f0));
  for (const CMat& f : p.fi) s = std::max(s, linalg::max_abs(f));
  return s;
}

// Strictly feasible start via minimizing the slack s with F(x) + sI >= 0.
// Returns the interior point, or nullopt with `verdict` set.
std::optional<Vec> phase1(const SDPProblem& p, int& steps, SolveStatus& verdict) {
  const int n = static_cast<int>(p.c.size());
  const int m = p.f0.n;
  const double scale = problem_scale(p);

  Vec x0(n, 0.0);
  const double lam0 = linalg::eig_herm(p.f_of(x0)).front();
  if (lam0 > 1e-8 * scale) return x0;

  SDPProblem ext;
  ext.c.assign(n + 1, 0.0);
  ext.c[n] = 1.0;
  ext.f0 = p.f0;
  ext.fi = p.fi;
  ext.fi.push_back(linalg::cmat_identity(m));

  Vec xs0(n + 1, 0.0);
  xs0[n] = -lam0 + 1.0;

  // Any strictly interior slack serves as a start; thin feasible sets make
  // large margins unreachable.
  const double exit_margin = 1e-7 * scale;
  PathResult pr = barrier_path(
      ext, xs0, 1e-10, kNewtonBudget,
      [&](const Vec& xs) { return xs[n] <= -exit_margin; });
  steps += pr.newton_steps;

  const double s_final = pr.x.empty() ? 0.0 : pr.x[n];
  if (pr.status == SolveStatus::optimal && s_final < -1e-9) {
    Vec x(pr.x.begin(), pr.x.begin() + n);
    return x;
  }
  verdict = (pr.status == SolveStatus::optimal || pr.status == SolveStatus::max_iterations)
                ? SolveStatus::infeasible
                : pr.status;
  return std::nullopt;
}

SDPSolution finish_solution(const SDPProblem& p, PathResult&& pr) {
  SDPSolution sol;
  sol.status = pr.status;
  sol.x = std::move(pr.x);
  sol.z = std::move(pr.z);
  sol.newton_steps = pr.newton_steps;
  sol.trace = std::move(pr.trace);
  if (!sol.x.empty()) sol.pstar = dot(p.c, sol.x);
  if (sol.z.n == p.f0.n && sol.z.n > 0) {
    sol.dstar = -linalg::re_trace_prod(p.f0, sol.z);
    sol.gap = sol.pstar - sol.dstar;
  }
  return sol;
}

SDPSolution solve_engine(const SDPProblem& p, double tol) {
  int steps = 0;
  SolveStatus verdict = SolveStatus::infeasible;
  std::optional<Vec> x0 = phase1(p, steps, verdict);
  if (!x0) {
    SDPSolution sol;
    sol.status = verdict;
    sol.newton_steps = steps;
    return sol;
  }
  PathResult pr = barrier_path(p, std::move(*x0), tol, kNewtonBudget - steps, nullptr);
  pr.newton_steps += steps;
  return finish_solution(p, std::move(pr));
}

}  // namespace

SDPSolution solve_sdp(const SDPProblem& prob, double tol) {
  validate_problem(prob);
  if (!(tol > 0)) raise(Errc::out_of_range, "tol must be positive");
  return solve_engine(prob, tol);
}

double duality_gap(const SDPProblem& prob, std::span<const double> x, const CMat& z) {
  const int n = static_cast<int>(prob.c.size());
  if (static_cast<int>(x.size()) != n) raise(Errc::dimension_mismatch, "x");
  if (z.n != prob.f0.n) raise(Errc::dimension_mismatch, "Z");
  const double scale = problem_scale(prob);

  const CMat fx = prob.f_of(x);
  if (linalg::eig_herm(fx).front() < -1e-9 * scale)
    raise(Errc::not_feasible, "primal: F(x) has a negative eigenvalue");
  if (linalg::herm_defect(z) > 1e-9) raise(Errc::not_feasible, "dual: Z not Hermitian");
  if (linalg::eig_herm(z).front() < -1e-9)
    raise(Errc::not_feasible, "dual: Z has a negative eigenvalue");
  for (int i = 0; i < n; ++i) {
    const double resid = linalg::re_trace_prod(prob.fi[i], z) - prob.c[i];
    if (std::abs(resid) > 1e-9)
      raise(Errc::not_feasible,
            "dual: tr(F" + std::to_string(i + 1) + " Z) - c = " + std::to_string(resid));
  }

  const double via_objectives = dot(prob.c, x) + linalg::re_trace_prod(prob.f0, z);
  const double via_product = linalg::re_trace_prod(fx, z);
  if (std::abs(via_objectives - via_product) > 1e-10)
    raise(Errc::not_feasible, "gap expressions disagree beyond 1e-10");
  if (via_objectives < -1e-10) raise(Errc::not_feasible, "negative duality gap");
  return via_objectives;
}

double slackness_residual(const CMat& fx, const CMat& z) {
  return std::max(linalg::max_abs(fx * z), linalg::max_abs(z * fx));
}

bool check_slackness(const CMat& fx, const CMat& z, double tol) {
  return slackness_residual(fx, z) <= tol;
}

KKTReport check_kkt(const Differentiable& objective, const std::vector<Differentiable>& equalities,
                    const std::vector<Differentiable>& inequalities, std::span<const double> x,
                    std::span<const double> zeta, std::span<const double> y, double tol) {
  if (zeta.size() != equalities.size())
    raise(Errc::dimension_mismatch, "zeta has " + std::to_string(zeta.size()) + " entries for " +
                                        std::to_string(equalities.size()) + " equalities");
  if (y.size() != inequalities.size())
    raise(Errc::dimension_mismatch, "y has " + std::to_string(y.size()) + " entries for " +
                                        std::to_string(inequalities.size()) + " inequalities");

  KKTReport rep;
  rep.zeta.assign(zeta.begin(), zeta.end());
  rep.y.assign(y.begin(), y.end());

  double eq_viol = 0.0;
  for (const Differentiable& h : equalities) eq_viol = std::max(eq_viol, std::abs(h.value(x)));

  double ineq_viol = 0.0, comp_viol = 0.0, dual_viol = 0.0;
  std::vector<double> gvals(inequalities.size());
  for (size_t i = 0; i < inequalities.size(); ++i) {
    gvals[i] = inequalities[i].value(x);
    ineq_viol = std::max(ineq_viol, gvals[i]);
    dual_viol = std::max(dual_viol, -y[i]);
    comp_viol = std::max(comp_viol, std::abs(y[i] * gvals[i]));
  }
  ineq_viol = std::max(0.0, ineq_viol);
  dual_viol = std::max(0.0, dual_viol);

  Vec grad = objective.gradient(x);
  if (grad.size() != x.size()) raise(Errc::dimension_mismatch, "objective gradient");
  auto accumulate = [&](const Differentiable& fn, double mult) {
    Vec g = fn.gradient(x);
    if (g.size() != x.size()) raise(Errc::dimension_mismatch, "constraint gradient");
    for (size_t j = 0; j < grad.size(); ++j) grad[j] += mult * g[j];
  };
  for (size_t i = 0; i < equalities.size(); ++i) accumulate(equalities[i], zeta[i]);
  for (size_t i = 0; i < inequalities.size(); ++i) accumulate(inequalities[i], y[i]);
  const double stat_viol = inf_norm(grad);

  rep.primal_feasible_eq = eq_viol <= tol;
  rep.primal_feasible_ineq = ineq_viol <= tol;
  rep.dual_feasible = dual_viol <= tol;
  rep.complementary = comp_viol <= tol;
  rep.stationary = stat_viol <= tol;
  rep.max_violation = std::max({eq_viol, ineq_viol, dual_viol, comp_viol, stat_viol});
  return rep;
}

namespace {

// Walk nullspace directions of the active columns until the support is a
// basis; never increases the objective beyond round-off.
void purify_to_vertex(const Mat& a, const Vec& c, Vec& x) {
  const int n = a.cols;
  const double support_eps = 1e-11;
  const double obj_tol = 1e-8 * std::max(1.0, inf_norm(c));

  for (int guard = 0; guard <= n; ++guard) {
    std::vector<int> sup;
    for (int i = 0; i < n; ++i) {
      if (x[i] > support_eps)
        sup.push_back(i);
      else
        x[i] = 0.0;
    }
    if (sup.empty()) return;

    Mat as(a.rows, static_cast<int>(sup.size()));
    for (int r = 0; r < a.rows; ++r)
      for (size_t j = 0; j < sup.size(); ++j) as(r, static_cast<int>(j)) = a(r, sup[j]);
    Mat ns = linalg::nullspace_basis(as, 1e-11);
    if (ns.cols == 0) return;  // support columns independent: basic solution

    Vec dir(n, 0.0);
    for (size_t j = 0; j < sup.size(); ++j) dir[sup[j]] = ns(static_cast<int>(j), 0);
    const double cd = dot(c, dir);

    auto has_block = [&](int sg) {
      for (int i : sup)
        if (sg * dir[i] < -1e-14) return true;
      return false;
    };
    int sign;
    if (cd > obj_tol)
      sign = -1;
    else if (cd < -obj_tol)
      sign = +1;
    else
      sign = has_block(+1) ? +1 : -1;
    if (!has_block(sign)) {
      sign = -sign;
      if (!has_block(sign)) raise(Errc::unbounded, "free ray in the feasible set");
    }

    double alpha = std::numeric_limits<double>::infinity();
    int blocker = -1;
    for (int i : sup) {
      const double di = sign * dir[i];
      if (di < -1e-14) {
        const double step = x[i] / (-di);
        if (step < alpha * (1.0 - 1e-12)) {
          alpha = step;
          blocker = i;
        }
      }
    }
    for (int i : sup) x[i] += sign * alpha * dir[i];
    x[blocker] = 0.0;
    for (int i : sup) x[i] = std::max(x[i], 0.0);
  }
}

Mat transpose(const Mat& a) {
  Mat t(a.cols, a.rows);
  for (int i = 0; i < a.rows; ++i)
    for (int j = 0; j < a.cols; ++j) t(j, i) = a(i, j);
  return t;
}

Vec mat_vec(const Mat& a, const Vec& v) {
  Vec r(a.rows, 0.0);
  for (int i = 0; i < a.rows; ++i)
    for (int j = 0; j < a.cols; ++j) r[i] += a(i, j) * v[j];
  return r;
}

}  // namespace

LPSolution solve_lp(const Vec& c, const Mat& a, const Vec& b) {
  const int n = a.cols, d = a.rows;
  if (static_cast<int>(c.size()) != n || static_cast<int>(b.size()) != d || n == 0)
    raise(Errc::dimension_mismatch, "LP shapes");
  if (n > 16 || d > 16) raise(Errc::dimension_mismatch, "desk scale is n, d <= 16");

  Vec xp;
  if (!linalg::solve_consistent(a, b, xp, 1e-11))
    raise(Errc::infeasible, "Ax = b has no solution");
  const Mat nb = linalg::nullspace_basis(a, 1e-11);
  const int nz = nb.cols;
  if (nz > 8) raise(Errc::dimension_mismatch, "nullspace dimension exceeds 8");

  Vec x_int;
  if (nz == 0) {
    for (double v : xp)
      if (v < -1e-9) raise(Errc::infeasible, "unique solution of Ax = b is not nonnegative");
    for (double& v : xp) v = std::max(v, 0.0);
    x_int = xp;
  } else {
    SDPProblem lp_as_sdp;
    lp_as_sdp.c.resize(nz);
    for (int k = 0; k < nz; ++k) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += nb(i, k) * c[i];
      lp_as_sdp.c[k] = s;
    }
    lp_as_sdp.f0 = CMat(n);
    for (int i = 0; i < n; ++i) lp_as_sdp.f0(i, i) = xp[i];
    for (int k = 0; k < nz; ++k) {
      CMat fk(n);
      for (int i = 0; i < n; ++i) fk(i, i) = nb(i, k);
      lp_as_sdp.fi.push_back(std::move(fk));
    }
    // The barrier only has to localize the optimum; purification to a vertex
    // afterwards makes the returned point and certificates exact.
    const SDPSolution sol = solve_engine(lp_as_sdp, n * 1e-8);
    if (sol.status == SolveStatus::infeasible) raise(Errc::infeasible, "no interior point");
    if (sol.status == SolveStatus::unbounded) raise(Errc::unbounded, "objective unbounded below");
    if (sol.status == SolveStatus::max_iterations)
      raise(Errc::max_iterations, "barrier iteration cap");
    x_int = xp;
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < nz; ++k) x_int[i] += nb(i, k) * sol.x[k];
  }

  LPSolution out;
  out.x = x_int;
  purify_to_vertex(a, c, out.x);

  // Multipliers from a basis: A_S^T zeta = c_S, then y = c - A^T zeta with
  // y zeroed on the support. Feasible basis duals exist at some optimal
  // vertex; if the purified one lacks them, search the enumerated optima.
  auto basis_duals = [&](const Vec& x, Vec& zeta, Vec& y) {
    std::vector<int> sup;
    for (int i = 0; i < n; ++i)
      if (x[i] > 0.0) sup.push_back(i);
    Mat ast(static_cast<int>(sup.size()), d);
    Vec cs(sup.size());
    for (size_t r = 0; r < sup.size(); ++r) {
      for (int j = 0; j < d; ++j) ast(static_cast<int>(r), j) = a(j, sup[r]);
      cs[r] = c[sup[r]];
    }
    if (!linalg::solve_consistent(ast, cs, zeta, 1e-10)) return false;
    const Vec atz = mat_vec(transpose(a), zeta);
    y.assign(n, 0.0);
    for (int i = 0; i < n; ++i) y[i] = c[i] - atz[i];
    for (int i : sup) y[i] = 0.0;
    for (double v : y)
      if (v < -1e-9) return false;
    for (double& v : y) v = std::max(v, 0.0);
    return true;
  };
  if (!basis_duals(out.x, out.zeta, out.y)) {
    bool repaired = false;
    for (const Vec& vertex : solve_lp_enumerate(c, a, b).optimal_vertices) {
      if (basis_duals(vertex, out.zeta, out.y)) {
        out.x = vertex;
        repaired = true;
        break;
      }
    }
    if (!repaired) raise(Errc::not_feasible, "no multipliers consistent with the solution");
  }

  out.value = dot(c, out.x);
  out.strictly_complementary = true;
  for (int i = 0; i < n; ++i)
    if (!(out.x[i] + out.y[i] > 1e-9)) out.strictly_complementary = false;

#ifndef NDEBUG
  {
    const LPEnumeration check = solve_lp_enumerate(c, a, b);
    assert(check.feasible && std::abs(check.value - out.value) <= 1e-6);
  }
#endif
  return out;
}

LPEnumeration solve_lp_enumerate(const Vec& c, const Mat& a, const Vec& b) {
  const int n = a.cols, d = a.rows;
  if (static_cast<int>(c.size()) != n || static_cast<int>(b.size()) != d)
    raise(Errc::dimension_mismatch, "LP shapes");
  if (n > 16) raise(Errc::dimension_mismatch, "desk scale is n <= 16");
  const int r = linalg::rref(a, 1e-11).rank;

  LPEnumeration out;
  std::vector<std::pair<double, Vec>> vertices;

  std::vector<int> comb(r);
  for (int i = 0; i < r; ++i) comb[i] = i;
  auto next_comb = [&]() {
    int i = r - 1;
    while (i >= 0 && comb[i] == n - r + i) --i;
    if (i < 0) return false;
    ++comb[i];
    for (int j = i + 1; j < r; ++j) comb[j] = comb[j - 1] + 1;
    return true;
  };

  if (r == 0) {
    if (inf_norm(b) <= 1e-9) vertices.emplace_back(0.0, Vec(n, 0.0));
  } else {
    do {
      Mat as(d, r);
      for (int row = 0; row < d; ++row)
        for (int j = 0; j < r; ++j) as(row, j) = a(row, comb[j]);
      Vec xs;
      if (!linalg::solve_consistent(as, b, xs, 1e-11)) continue;
      Vec resid = mat_vec(as, xs);
      double rmax = 0.0;
      for (int row = 0; row < d; ++row) rmax = std::max(rmax, std::abs(resid[row] - b[row]));
      if (rmax > 1e-9) continue;
      bool nonneg = true;
      for (double v : xs) nonneg = nonneg && v >= -1e-9;
      if (!nonneg) continue;
      Vec x(n, 0.0);
      for (int j = 0; j < r; ++j) x[comb[j]] = std::max(xs[j], 0.0);
      vertices.emplace_back(dot(c, x), std::move(x));
    } while (next_comb());
  }

  if (vertices.empty()) return out;
  out.feasible = true;
  out.value = vertices.front().first;
  for (const auto& v : vertices) out.value = std::min(out.value, v.first);
  for (auto& v : vertices) {
    if (v.first > out.value + 1e-9) continue;
    bool dup = false;
    for (const Vec& seen : out.optimal_vertices) {
      double diff = 0.0;
      for (int i = 0; i < n; ++i) diff = std::max(diff, std::abs(seen[i] - v.second[i]));
      dup = dup || diff <= 1e-9;
    }
    if (!dup) out.optimal_vertices.push_back(v.second);
  }
  out.x = out.optimal_vertices.front();
  for (const Vec& v : out.optimal_vertices)
    if (std::lexicographical_compare(v.begin(), v.end(), out.x.begin(), out.x.end())) out.x = v;
  return out;
}

SDPProblem lsd_as_sdp(const BDState& rho, const BDState& sigma) {
  if (classify(rho).region != Region::entangled)
    raise(Errc::not_entangled, "rho must classify entangled");
  if (classify(sigma).region == Region::entangled)
    raise(Errc::not_separable, "sigma must classify separable");
  SDPProblem prob;
  prob.c = {-1.0};
  prob.f0 = CMat(4);
  CMat f1(4);
  for (int i = 0; i < 4; ++i) {
    prob.f0(i, i) = rho.p(i);
    f1(i, i) = -sigma.p(i);
  }
  prob.fi.push_back(std::move(f1));
  return prob;
}

LsdLpResult lsd_lp_over_separable(const BDState& rho) {
  if (classify(rho).region != Region::entangled)
    raise(Errc::not_entangled, "rho must classify entangled");
  const auto& p = rho.probs();

  // Variables (q, u, v): q_i + u_i = p_i and sum_j q_j - 2 q_i - v_i = 0.
  Mat a(8, 12);
  Vec b(8, 0.0), c(12, 0.0);
  for (int i = 0; i < 4; ++i) {
    a(i, i) = 1.0;
    a(i, 4 + i) = 1.0;
    b[i] = p[i];
    for (int j = 0; j < 4; ++j) a(4 + i, j) = 1.0;
    a(4 + i, i) -= 2.0;
    a(4 + i, 8 + i) = -1.0;
    c[i] = -1.0;
  }
  const LPSolution sol = solve_lp(c, a, b);

  LsdLpResult out;
  out.lambda = -sol.value;
  if (out.lambda < 1e-12) {
    out.sigma = bd_from_probs({0.25, 0.25, 0.25, 0.25});
    out.lambda = std::max(out.lambda, 0.0);
    return out;
  }
  std::array<double, 4> sigma_p;
  for (int i = 0; i < 4; ++i) sigma_p[i] = sol.x[i] / out.lambda;
  out.sigma = bd_from_probs(sigma_p);
  return out;
}

namespace {

jsonio::Value cmat_to_json(const CMat& m) {
  jsonio::Array rows;
  for (int i = 0; i < m.n; ++i) {
    jsonio::Array row;
    for (int j = 0; j < m.n; ++j)
      row.push_back(jsonio::Array{m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

CMat cmat_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.empty()) raise(Errc::parse_error, "matrix must be a nonempty array");
  const int n = static_cast<int>(j.size());
  CMat m(n);
  for (int i = 0; i < n; ++i) {
    if (!j[i].is_array() || static_cast<int>(j[i].size()) != n)
      raise(Errc::parse_error, "matrix rows must all have the matrix dimension");
    for (int k = 0; k < n; ++k) {
      const auto& e = j[i][k];
      if (!e.is_array() || e.size() != 2)
        raise(Errc::parse_error, "matrix entries must be [re, im] pairs");
      m(i, k) = cplx{e[0].get<double>(), e[1].get<double>()};
    }
  }
  return m;
}

}  // namespace

std::string sdp_to_json(const SDPProblem& prob) {
  jsonio::Array c;
  for (double v : prob.c) c.push_back(v);
  jsonio::Array fi;
  for (const CMat& f : prob.fi) fi.push_back(cmat_to_json(f));
  return jsonio::dump(jsonio::Object{
      {"c", std::move(c)}, {"F0", cmat_to_json(prob.f0)}, {"Fi", std::move(fi)}});
}

SDPProblem sdp_from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    raise(Errc::parse_error, e.what());
  }
  try {
    if (!doc.is_object() || !doc.contains("c") || !doc.contains("F0") || !doc.contains("Fi"))
      raise(Errc::parse_error, "problem needs keys c, F0, Fi");
    SDPProblem prob;
    for (const auto& v : doc["c"]) prob.c.push_back(v.get<double>());
    prob.f0 = cmat_from_json(doc["F0"]);
    for (const auto& f : doc["Fi"]) prob.fi.push_back(cmat_from_json(f));
    return prob;
  } catch (const nlohmann::json::exception& e) {
    raise(Errc::parse_error, e.what());
  }
}

}  // namespace bdconvex
