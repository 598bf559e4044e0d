#include "bdconvex/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "bdconvex/error.hpp"

namespace bdconvex::oracle {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLatticeEps = 1e-12;
constexpr double kCoarseStep = 1e-2;
constexpr double kFineBoxHalfWidth = 5e-2;

struct Box {
  int lo[3] = {0, 0, 0};
  int hi[3] = {0, 0, 0};
};

struct Best {
  double value = kInf;
  int i1 = 0, i2 = 0, i3 = 0;
};

// KL divergence in bits; +inf when w puts weight outside the support of p.
struct KlBitsEval {
  std::array<double, 4> p;
  double operator()(double w0, double w1, double w2, double w3) const {
    const double w[4] = {w0, w1, w2, w3};
    double s = 0.0;
    for (int i = 0; i < 4; ++i) {
      if (w[i] <= 0.0) continue;
      if (p[i] <= 0.0) return kInf;
      s += w[i] * std::log(w[i] / p[i]);
    }
    return s * 1.4426950408889634;  // 1/ln 2
  }
};

// Negated candidate separable weight min_i p_i / w_i (negated to share the
// minimizing scan).
struct NegLambdaEval {
  std::array<double, 4> p;
  double operator()(double w0, double w1, double w2, double w3) const {
    const double w[4] = {w0, w1, w2, w3};
    double lam = kInf;
    for (int i = 0; i < 4; ++i)
      if (w[i] > 0.0) lam = std::min(lam, p[i] / w[i]);
    return -lam;
  }
};

// One slab of the scan: fixed i1, sweep (i2, i3) in ascending order. The
// point arithmetic here is the single source of truth for both execution
// modes, so serial and parallel results agree bit for bit.
template <class Eval>
void scan_slab(int i1, const Box& box, double step, const Eval& eval, Best& best,
               long long& count) {
  Best local;
  long long seen = 0;  // locals avoid false sharing on the slab arrays
  const double w1 = i1 * step;
  for (int i2 = box.lo[1]; i2 <= box.hi[1]; ++i2) {
    const double w2 = i2 * step;
    // Generous index bounds from the normalization, then an exact test.
    const double rest = 1.0 - w1 - w2;
    int lo3 = std::max(box.lo[2], static_cast<int>(std::ceil((rest - 0.5) / step)) - 1);
    int hi3 = std::min(box.hi[2], static_cast<int>(std::floor(rest / step)) + 1);
    for (int i3 = lo3; i3 <= hi3; ++i3) {
      const double w3 = i3 * step;
      double w4 = 1.0 - w1 - w2 - w3;
      if (w4 < -kLatticeEps || w4 > 0.5 + kLatticeEps) continue;
      w4 = std::max(w4, 0.0);
      ++seen;
      const double v = eval(w1, w2, w3, w4);
      if (v < local.value) local = Best{v, i1, i2, i3};
    }
  }
  best = local;
  count = seen;
}

template <class Eval>
void run_scan(const Box& box, double step, Exec exec, const Eval& eval, Best& best,
              long long& count) {
  best = Best{};
  count = 0;
  if (exec == Exec::serial) {
    for (int i1 = box.lo[0]; i1 <= box.hi[0]; ++i1) {
      Best slab;
      long long seen = 0;
      scan_slab(i1, box, step, eval, slab, seen);
      count += seen;
      if (slab.value < best.value) best = slab;
    }
    return;
  }
  const int slabs = box.hi[0] - box.lo[0] + 1;
  if (slabs <= 0) return;
  std::vector<Best> slab_best(slabs);
  std::vector<long long> slab_count(slabs, 0);
  // Slab sizes shrink toward the simplex corner; round-robin balances them.
  // Any schedule is fine for determinism: the reduction is by slab index.
#pragma omp parallel for schedule(static, 1)
  for (int s = 0; s < slabs; ++s)
    scan_slab(box.lo[0] + s, box, step, eval, slab_best[s], slab_count[s]);
  for (int s = 0; s < slabs; ++s) {  // slab order keeps ties deterministic
    count += slab_count[s];
    if (slab_best[s].value < best.value) best = slab_best[s];
  }
}

int separable_cap(double step) {
  return static_cast<int>(std::floor((0.5 + kLatticeEps) / step));
}

Box global_box(double step) {
  Box b;
  for (int j = 0; j < 3; ++j) {
    b.lo[j] = 0;
    b.hi[j] = separable_cap(step);
  }
  return b;
}

Box box_around(const std::array<double, 4>& center, double half_width, double step) {
  Box b;
  const int cap = separable_cap(step);
  for (int j = 0; j < 3; ++j) {
    b.lo[j] = std::max(0, static_cast<int>(std::ceil((center[j] - half_width) / step - 1e-9)));
    b.hi[j] = std::min(cap, static_cast<int>(std::floor((center[j] + half_width) / step + 1e-9)));
  }
  return b;
}

BDState lattice_state(const Best& best, double step) {
  const double w1 = best.i1 * step, w2 = best.i2 * step, w3 = best.i3 * step;
  return bd_from_probs({w1, w2, w3, std::max(1.0 - w1 - w2 - w3, 0.0)});
}

void validate(const BDState& rho, double step) {
  if (!(step >= 1e-4 && step <= 1e-1))
    raise(Errc::step_out_of_range, "step must lie in [1e-4, 1e-1]");
  if (classify(rho).region != Region::entangled)
    raise(Errc::not_entangled, "oracle scans need an entangled state");
}

template <class Eval>
GridResult two_pass(const BDState& rho, double step, Exec exec, const Eval& eval,
                    bool negate_value) {
  validate(rho, step);
  GridResult out;
  out.grid_step = step;

  Best best;
  long long count = 0;
  if (step >= kCoarseStep * (1.0 - 1e-9)) {
    run_scan(global_box(step), step, exec, eval, best, count);
    out.points_evaluated = count;
  } else {
    Best coarse;
    run_scan(global_box(kCoarseStep), kCoarseStep, exec, eval, coarse, count);
    out.points_evaluated = count;
    const BDState coarse_arg = lattice_state(coarse, kCoarseStep);
    run_scan(box_around(coarse_arg.probs(), kFineBoxHalfWidth, step), step, exec, eval, best,
             count);
    out.points_evaluated += count;
    if (coarse.value < best.value) {
      out.argopt = coarse_arg;
      out.value = negate_value ? -coarse.value : coarse.value;
      return out;
    }
  }
  out.argopt = lattice_state(best, step);
  out.value = negate_value ? -best.value : best.value;
  return out;
}

template <class Eval>
GridResult single_pass(const BDState& rho, double step, Exec exec, const Eval& eval,
                       bool negate_value) {
  validate(rho, step);
  GridResult out;
  out.grid_step = step;
  Best best;
  long long count = 0;
  run_scan(global_box(step), step, exec, eval, best, count);
  out.points_evaluated = count;
  out.argopt = lattice_state(best, step);
  out.value = negate_value ? -best.value : best.value;
  return out;
}

}  // namespace

GridResult grid_min_ree(const BDState& rho, double step, Exec exec) {
  return two_pass(rho, step, exec, KlBitsEval{rho.probs()}, false);
}

GridResult grid_max_lambda(const BDState& rho, double step, Exec exec) {
  return two_pass(rho, step, exec, NegLambdaEval{rho.probs()}, true);
}

GridResult scan_min_ree(const BDState& rho, double step, Exec exec) {
  return single_pass(rho, step, exec, KlBitsEval{rho.probs()}, false);
}

GridResult scan_max_lambda(const BDState& rho, double step, Exec exec) {
  return single_pass(rho, step, exec, NegLambdaEval{rho.probs()}, true);
}

}  // namespace bdconvex::oracle
