// Times the grid-scan kernels in serial and OpenMP execution and checks that
// the two modes agree bit for bit.

#include <chrono>
#include <cstdio>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"

#include "bdconvex/bdstate.hpp"
#include "bdconvex/oracle.hpp"

using namespace bdconvex;
using Clock = std::chrono::high_resolution_clock;

namespace {

struct Timing {
  oracle::GridResult result;
  double seconds;
};

template <class Fn>
Timing timed(Fn&& fn) {
  const auto t0 = Clock::now();
  oracle::GridResult r = fn();
  const std::chrono::duration<double> dt = Clock::now() - t0;
  return {std::move(r), dt.count()};
}

bool identical(const oracle::GridResult& a, const oracle::GridResult& b) {
  if (a.value != b.value || a.points_evaluated != b.points_evaluated) return false;
  for (int i = 0; i < 4; ++i)
    if (a.argopt.p(i) != b.argopt.p(i)) return false;
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Serial vs OpenMP comparison of the lattice-scan oracles"};
  double step = 2e-3;
  double p1 = 0.7;
  app.add_option("--step", step, "lattice spacing (default 2e-3)");
  app.add_option("--p1", p1, "dominant Bell weight of the scanned state");
  CLI11_PARSE(app, argc, argv);

#ifdef _OPENMP
  std::printf("openmp threads: %d\n", omp_get_max_threads());
#else
  std::printf("openmp: not enabled in this build\n");
#endif

  const double r = (1.0 - p1) / 3.0;
  const BDState rho = bd_from_probs({p1, r, r, r});

  struct Kernel {
    const char* name;
    oracle::GridResult (*fn)(const BDState&, double, oracle::Exec);
  };
  const Kernel kernels[] = {{"scan_min_ree", oracle::scan_min_ree},
                            {"scan_max_lambda", oracle::scan_max_lambda}};

  int rc = 0;
  for (const Kernel& k : kernels) {
    const Timing serial = timed([&] { return k.fn(rho, step, oracle::Exec::serial); });
    const Timing parallel = timed([&] { return k.fn(rho, step, oracle::Exec::parallel); });
    const bool same = identical(serial.result, parallel.result);
    std::printf("%-16s step %.4g  points %lld  value %.12g\n", k.name, step,
                serial.result.points_evaluated, serial.result.value);
    std::printf("  serial   %8.3f s\n", serial.seconds);
    std::printf("  parallel %8.3f s  speedup %.2fx  results %s\n", parallel.seconds,
                serial.seconds / parallel.seconds, same ? "identical" : "DIFFER");
    if (!same) rc = 1;
  }
  return rc;
}
