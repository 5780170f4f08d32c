// Times the OpenMP sweep kernel against the serial reference on a dense
// thermal sweep and reports throughput plus an exact-output cross-check.
// Usage: bench_sweep [points] [repeats]

#include "optocorr/sweep.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>
#include <vector>

namespace {

using Clock = std::chrono::steady_clock;

double time_best_of(int repeats,
                    const std::function<std::vector<optocorr::SweepRow>()>& f,
                    std::vector<optocorr::SweepRow>& out) {
  double best = 1e300;
  for (int i = 0; i < repeats; ++i) {
    const auto t0 = Clock::now();
    out = f();
    const auto t1 = Clock::now();
    best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
  }
  return best;
}

}  // namespace

int main(int argc, char** argv) {
  const int points = argc > 1 ? std::atoi(argv[1]) : 200000;
  const int repeats = argc > 2 ? std::atoi(argv[2]) : 3;
  if (points < 2 || repeats < 1) {
    std::fprintf(stderr, "usage: bench_sweep [points >= 2] [repeats >= 1]\n");
    return 1;
  }

  optocorr::SweepSpec spec;
  spec.variable = optocorr::SweepVariable::nth;
  spec.start = 0.0;
  spec.stop = 30.0;
  spec.points = points;
  spec.fixed = optocorr::SystemParams(34.0, 1.5, 0.0, 0.05);

#ifdef _OPENMP
  const int threads = omp_get_max_threads();
#else
  const int threads = 1;
#endif

  std::vector<optocorr::SweepRow> serial_rows, parallel_rows;
  const double t_serial = time_best_of(
      repeats, [&] { return optocorr::run_sweep_serial(spec); }, serial_rows);
  const double t_parallel = time_best_of(
      repeats, [&] { return optocorr::run_sweep(spec); }, parallel_rows);

  const bool identical = optocorr::csv_string(serial_rows) ==
                         optocorr::csv_string(parallel_rows);

  std::printf("rows               %d\n", points);
  std::printf("repeats            %d (best-of)\n", repeats);
  std::printf("threads            %d\n", threads);
  std::printf("serial             %.4f s  (%.2f Mrow/s)\n", t_serial,
              points / t_serial / 1e6);
  std::printf("openmp             %.4f s  (%.2f Mrow/s)\n", t_parallel,
              points / t_parallel / 1e6);
  std::printf("speedup            %.2fx\n", t_serial / t_parallel);
  std::printf("outputs identical  %s\n", identical ? "yes" : "NO");
  return identical ? 0 : 1;
}
