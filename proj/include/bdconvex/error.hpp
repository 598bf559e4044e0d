#pragma once

#include <stdexcept>
#include <string>

namespace bdconvex {

// Failure categories shared across the library. Solver statuses that are
// part of a normal result (Infeasible/Unbounded/MaxIterations from solve_sdp)
// live in the result types; these codes are for hard errors.
enum class Errc {
  negative_probability,
  not_normalized,
  outside_tetrahedron,
  not_hermitian,
  not_entangled,
  not_separable,
  mismatch,
  not_distribution,
  no_slater_point,
  newton_divergence,
  out_of_range,
  step_out_of_range,
  dimension_mismatch,
  infeasible,
  unbounded,
  max_iterations,
  not_feasible,
  parse_error,
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace bdconvex
