// Benchmark comparing the serial reference runner against the OpenMP runner
// on identical experiment specs (reports must match bit for bit), plus the
// mean charged cost of the fast pipeline against the exact oracle.

#include <chrono>
#include <cstdio>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "syncauto/experiments.hpp"
#include "syncauto/fast_decide.hpp"
#include "syncauto/oracle.hpp"

using namespace syncauto;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void bench_runner(Metric metric, State n, std::int64_t samples, std::uint64_t seed) {
  ExperimentSpec spec;
  spec.metric = metric;
  spec.n_grid = {n};
  spec.samples = samples;
  spec.seed = seed;

  auto t0 = std::chrono::steady_clock::now();
  const ExperimentReport serial = run_experiment(spec, 1);
  const double ts = seconds_since(t0);

  t0 = std::chrono::steady_clock::now();
  const ExperimentReport parallel = run_experiment(spec, 0);
  const double tp = seconds_since(t0);

  const bool same = report_to_json(serial, false) == report_to_json(parallel, false);
  std::printf("%-17s n=%-6d samples=%-7lld serial %8.3fs  openmp %8.3fs  speedup %5.2fx  %s\n",
              metric_name(metric), int(n), (long long)samples, ts, tp, ts / tp,
              same ? "identical" : "MISMATCH");
}

void bench_deciders(State n, std::int64_t samples, std::uint64_t seed) {
  double fast_steps = 0, exact_steps = 0;
  auto t0 = std::chrono::steady_clock::now();
  for (std::int64_t t = 0; t < samples; ++t) {
    Rng rng = Rng::derive(seed, std::uint64_t(n), std::uint64_t(t));
    const Dfa d = random_dfa(n, 2, rng);
    fast_steps += double(fast_decide(d).steps);
  }
  const double tf = seconds_since(t0);
  t0 = std::chrono::steady_clock::now();
  for (std::int64_t t = 0; t < samples; ++t) {
    Rng rng = Rng::derive(seed, std::uint64_t(n), std::uint64_t(t));
    const Dfa d = random_dfa(n, 2, rng);
    exact_steps += double(decide_exact(d).steps);
  }
  const double te = seconds_since(t0);
  std::printf("decide            n=%-6d samples=%-7lld fast %9.0f steps (%6.3fs)  exact %11.0f steps (%6.3fs)\n",
              int(n), (long long)samples, fast_steps / double(samples), tf,
              exact_steps / double(samples), te);
}

}  // namespace

int main(int argc, char** argv) {
  std::int64_t samples = 2000;
  if (argc > 1) samples = std::stoll(argv[1]);
#ifdef _OPENMP
  std::printf("openmp threads: %d\n", omp_get_max_threads());
#else
  std::printf("openmp: not enabled (serial build)\n");
#endif
  bench_runner(Metric::sync_prob, 256, samples, 42);
  bench_runner(Metric::high_tree_fail, 4096, samples, 42);
  bench_runner(Metric::min_closed_small, 1000, samples, 42);
  for (State n : {128, 256, 512, 1024}) bench_deciders(n, samples / 4 + 1, 42);
  return 0;
}
