#pragma once

// Monte Carlo harness over uniformly random automata. Trials draw their
// generator from (seed, n, trial index) alone and aggregation is an integer
// sum, so a report depends only on (spec, seed) — never on the worker count
// or the schedule. The parallel runner is an OpenMP loop over trials; the
// serial runner is kept as the reference implementation.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "syncauto/dfa.hpp"

namespace syncauto {

enum class Metric {
  sync_prob,         // fast_decide says NOT synchronizing
  cycle_tail,        // cycle count of letter 0 exceeds factor * ln n
  high_tree_fail,    // letter 0 lacks a unique highest tree with margin >= 2
  min_closed_small,  // smallest closed component below n / (divisor * e^2)
  high_reach_fail,   // vertices above the second-highest tree miss a closed component
  fast_fallback,     // fast_decide used the exact fallback
};

const char* metric_name(Metric m);
std::optional<Metric> metric_from_name(const std::string& name);

struct ExperimentSpec {
  Metric metric = Metric::sync_prob;
  std::vector<State> n_grid;      // strictly increasing
  Letter k = 2;
  std::int64_t samples = 0;       // per grid point; ignored in exhaustive mode
  std::uint64_t seed = 0;
  bool exhaustive = false;        // enumerate every table instead of sampling
  double cycle_tail_factor = 5.0;
  double min_closed_divisor = 2.0;
  double budget_scale = 1.0;
};

struct ExperimentRow {
  State n = 0;
  std::int64_t trials = 0;
  std::int64_t successes = 0;
  double frequency = 0.0;
  double wilson_lo = 0.0;
  double wilson_hi = 0.0;
};

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double stderr_slope = 0.0;
  int points = 0;
};

struct ExperimentReport {
  ExperimentSpec spec;
  std::vector<ExperimentRow> rows;
  std::optional<SlopeFit> fit;  // set when >= 3 rows, all frequencies nonzero
  double wall_seconds = 0.0;    // timing metadata, excluded from report identity
};

// One Bernoulli observation per trial. workers <= 0 means all hardware
// threads; workers == 1 runs the serial reference loop.
ExperimentReport run_experiment(const ExperimentSpec& spec, int workers = 0);

// Single-trial indicator, exposed for the exhaustive mode and tests.
bool metric_indicator(const ExperimentSpec& spec, const Dfa& d);

// Exact counts over every automaton with n states and k letters.
struct SmallCaseCounts {
  State n = 0;
  Letter k = 0;
  std::uint64_t total = 0;
  std::uint64_t synchronizing = 0;
  std::uint64_t not_weakly_connected = 0;
  std::uint64_t one_disconnected = 0;
};

SmallCaseCounts exact_small_n(State n, Letter k);

// Wilson score interval for a binomial proportion.
std::pair<double, double> wilson_interval(std::int64_t successes, std::int64_t trials,
                                          double z = 1.96);

// Least squares on (ln x, ln y). Requires >= 3 points with positive y;
// throws otherwise, directing the caller to raise the sample count or drop
// the offending point.
SlopeFit fit_loglog(std::span<const std::pair<double, double>> points);

// include_timing=false drops the wall-clock field, leaving only data that is
// a pure function of (spec, seed).
std::string report_to_json(const ExperimentReport& rep, bool include_timing = true);
std::string report_to_csv(const ExperimentReport& rep);

}  // namespace syncauto
