#pragma once

// Brute-force lattice scans over the separable octahedron. These certify the
// closed-form optima to lattice resolution and are entirely independent of
// the analytic code paths. The scans are data-parallel over slabs of the
// first lattice coordinate; the parallel kernels reduce slab results in
// slab order so results are deterministic (and bit-identical to the serial
// reference) for any thread count. Ties go to the lexicographically smallest
// lattice point.

#include "bdconvex/bdstate.hpp"

namespace bdconvex::oracle {

enum class Exec { serial, parallel };

struct GridResult {
  BDState argopt;             // lattice minimizer / maximizer
  double value = 0.0;         // bits for the REE scan, lambda for the LSD scan
  double grid_step = 0.0;     // evaluation (fine) spacing
  long long points_evaluated = 0;
};

// Lattice minimum of relative_entropy(w, p) over separable w. Steps below
// the coarse spacing 1e-2 run two passes: a global coarse pass, then a fine
// pass at `step` inside a +/- 5e-2 box around the coarse argmin.
// step must lie in [1e-4, 1e-1]; rho must classify entangled.
GridResult grid_min_ree(const BDState& rho, double step, Exec exec = Exec::parallel);

// Lattice maximum of the candidate separable weight min_i p_i / w_i over
// separable w; same two-pass strategy and preconditions.
GridResult grid_max_lambda(const BDState& rho, double step, Exec exec = Exec::parallel);

// Single-pass global scans at the given spacing: the raw kernels behind the
// two-pass drivers, exposed for the serial/parallel equivalence tests and
// the benchmark target.
GridResult scan_min_ree(const BDState& rho, double step, Exec exec);
GridResult scan_max_lambda(const BDState& rho, double step, Exec exec);

}  // namespace bdconvex::oracle
