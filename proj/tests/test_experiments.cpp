#include <cmath>

#include "common.hpp"
#include "doctest.h"
#include "syncauto/experiments.hpp"

using namespace syncauto;
using namespace syncauto::testing;

TEST_CASE("wilson_interval") {
  const auto [lo0, hi0] = wilson_interval(0, 100);
  CHECK(lo0 == 0.0);
  CHECK(hi0 > 0.0);

  const auto [lo, hi] = wilson_interval(50, 100);
  CHECK(lo == doctest::Approx(0.404).epsilon(0.01));
  CHECK(hi == doctest::Approx(0.596).epsilon(0.01));

  const auto [lo1, hi1] = wilson_interval(1, 1);
  CHECK(lo1 > 0.0);
  CHECK(hi1 == doctest::Approx(1.0).epsilon(1e-9));

  CHECK_THROWS_AS(wilson_interval(5, 4), std::invalid_argument);
  CHECK_THROWS_AS(wilson_interval(0, 0), std::invalid_argument);
  CHECK_THROWS_AS(wilson_interval(1, 2, 0.0), std::invalid_argument);
}

TEST_CASE("fit_loglog on exact power laws") {
  using P = std::pair<double, double>;
  const std::vector<P> line{{10, 0.1}, {100, 0.01}, {1000, 0.001}};
  const SlopeFit f1 = fit_loglog(line);
  CHECK(f1.slope == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(f1.stderr_slope == doctest::Approx(0.0).scale(1).epsilon(1e-9));

  const std::vector<P> half{{10, 0.3162277660168379}, {100, 0.1}, {1000, 0.03162277660168379}};
  CHECK(fit_loglog(half).slope == doctest::Approx(-0.5).epsilon(1e-3));

  // Multiplicative jitter of up to 10% keeps the recovered slope near -1.
  Rng rng(6);
  std::vector<P> jittered;
  for (double n : {8.0, 16.0, 32.0, 64.0, 128.0, 256.0, 512.0}) {
    const double noise = 0.9 + 0.2 * (double(rng.next_u64() >> 11) / 9007199254740992.0);
    jittered.emplace_back(n, noise / n);
  }
  const double slope = fit_loglog(jittered).slope;
  CHECK(slope > -1.1);
  CHECK(slope < -0.9);

  CHECK_THROWS_AS(fit_loglog(std::vector<P>{{1, 1}, {2, 0.5}}), std::invalid_argument);
  CHECK_THROWS_AS(fit_loglog(std::vector<P>{{1, 1}, {2, 0.5}, {3, 0.0}}), std::invalid_argument);
}

TEST_CASE("exact_small_n counts") {
  const SmallCaseCounts two = exact_small_n(2, 2);
  CHECK(two.total == 16);
  CHECK(two.synchronizing == 12);

  const SmallCaseCounts three = exact_small_n(3, 2);
  CHECK(three.total == 729);
  CHECK(three.one_disconnected == 27);

  const SmallCaseCounts one = exact_small_n(1, 2);
  CHECK(one.total == 1);
  CHECK(one.synchronizing == 1);
}

TEST_CASE("exhaustive sync-prob at n=2 is exactly 4/16") {
  ExperimentSpec spec;
  spec.metric = Metric::sync_prob;
  spec.n_grid = {2};
  spec.exhaustive = true;
  const ExperimentReport rep = run_experiment(spec, 1);
  REQUIRE(rep.rows.size() == 1);
  CHECK(rep.rows[0].trials == 16);
  CHECK(rep.rows[0].successes == 4);
  CHECK(rep.rows[0].frequency == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("reports are identical across worker counts") {
  ExperimentSpec spec;
  spec.metric = Metric::sync_prob;
  spec.n_grid = {16, 32, 64};
  spec.samples = 2000;
  spec.seed = 991;
  const ExperimentReport serial = run_experiment(spec, 1);
  const ExperimentReport parallel = run_experiment(spec, 4);
  CHECK(report_to_json(serial, false) == report_to_json(parallel, false));
  CHECK(report_to_csv(serial) == report_to_csv(parallel));
  const ExperimentReport repeat = run_experiment(spec, 4);
  CHECK(report_to_json(parallel, false) == report_to_json(repeat, false));
}

TEST_CASE("cycle-tail indicator is a rare event at n=1000") {
  ExperimentSpec spec;
  spec.metric = Metric::cycle_tail;
  spec.n_grid = {1000};
  spec.k = 1;
  spec.samples = 3000;
  spec.seed = 5;
  const ExperimentReport rep = run_experiment(spec, 0);
  CHECK(rep.rows[0].successes == 0);
}

TEST_CASE("high-reach-fail frequency at n=1000 stays under 0.05") {
  ExperimentSpec spec;
  spec.metric = Metric::high_reach_fail;
  spec.n_grid = {1000};
  spec.samples = 10'000;
  spec.seed = 13;
  const ExperimentReport rep = run_experiment(spec, 0);
  CHECK(rep.rows[0].frequency <= 0.05);
}

TEST_CASE("min-closed-small smoke at n=1000") {
  ExperimentSpec spec;
  spec.metric = Metric::min_closed_small;
  spec.n_grid = {1000};
  spec.samples = 2000;
  spec.seed = 29;
  const ExperimentReport rep = run_experiment(spec, 0);
  CHECK(rep.rows[0].frequency <= 0.05);
}

TEST_CASE("csv layout") {
  ExperimentSpec spec;
  spec.metric = Metric::fast_fallback;
  spec.n_grid = {8, 16};
  spec.samples = 50;
  spec.seed = 3;
  const ExperimentReport rep = run_experiment(spec, 1);
  const std::string csv = report_to_csv(rep);
  CHECK(csv.rfind("metric,n,trials,successes,freq,wilson_lo,wilson_hi\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
  CHECK(csv.find("fast-fallback,8,50,") != std::string::npos);
}

TEST_CASE("spec validation") {
  ExperimentSpec spec;
  spec.metric = Metric::sync_prob;
  spec.n_grid = {8, 8};
  spec.samples = 10;
  CHECK_THROWS_AS(run_experiment(spec, 1), std::invalid_argument);
  spec.n_grid = {};
  CHECK_THROWS_AS(run_experiment(spec, 1), std::invalid_argument);
  spec.n_grid = {8};
  spec.samples = 0;
  CHECK_THROWS_AS(run_experiment(spec, 1), std::invalid_argument);
}

TEST_CASE("metric names round-trip") {
  for (Metric m : {Metric::sync_prob, Metric::cycle_tail, Metric::high_tree_fail,
                   Metric::min_closed_small, Metric::high_reach_fail, Metric::fast_fallback})
    CHECK(metric_from_name(metric_name(m)) == m);
  CHECK_FALSE(metric_from_name("nope").has_value());
}
