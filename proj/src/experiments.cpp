#include "syncauto/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "json.hpp"
#include "syncauto/fast_decide.hpp"
#include "syncauto/funcgraph.hpp"
#include "syncauto/oracle.hpp"

namespace syncauto {

const char* metric_name(Metric m) {
  switch (m) {
    case Metric::sync_prob: return "sync-prob";
    case Metric::cycle_tail: return "cycle-tail";
    case Metric::high_tree_fail: return "high-tree-fail";
    case Metric::min_closed_small: return "min-closed-small";
    case Metric::high_reach_fail: return "high-reach-fail";
    case Metric::fast_fallback: return "fast-fallback";
  }
  return "unknown";
}

std::optional<Metric> metric_from_name(const std::string& name) {
  for (Metric m : {Metric::sync_prob, Metric::cycle_tail, Metric::high_tree_fail,
                   Metric::min_closed_small, Metric::high_reach_fail, Metric::fast_fallback})
    if (name == metric_name(m)) return m;
  return std::nullopt;
}

bool metric_indicator(const ExperimentSpec& spec, const Dfa& d) {
  switch (spec.metric) {
    case Metric::sync_prob: {
      BudgetPolicy bp;
      bp.scale = spec.budget_scale;
      return !fast_decide(d, bp).synchronizing;
    }
    case Metric::cycle_tail: {
      const LetterGraph lg = analyze_letter(d, 0);
      return cycle_count(lg) > spec.cycle_tail_factor * std::log(double(d.n));
    }
    case Metric::high_tree_fail: {
      const HighTreeStats st = high_tree_stats(analyze_letter(d, 0));
      return !(st.unique_highest && st.margin >= 2);
    }
    case Metric::min_closed_small: {
      const ClosedComponents cc = minimal_closed_components(d);
      const double threshold = double(d.n) / (spec.min_closed_divisor * std::exp(2.0));
      const std::int32_t smallest = *std::min_element(cc.sizes.begin(), cc.sizes.end());
      return double(smallest) < threshold;
    }
    case Metric::high_reach_fail: {
      const LetterGraph lg = analyze_letter(d, 0);
      const HighTreeStats st = high_tree_stats(lg);
      const std::int32_t min_level = st.h2 + 1;
      const ClosedComponents cc = minimal_closed_components(d);
      for (const auto& comp : cc.components) {
        bool hit = false;
        for (State q : comp)
          if (lg.level[q] >= min_level) {
            hit = true;
            break;
          }
        if (!hit) return true;
      }
      return false;
    }
    case Metric::fast_fallback: {
      BudgetPolicy bp;
      bp.scale = spec.budget_scale;
      return fast_decide(d, bp).fallback;
    }
  }
  return false;
}

namespace {

void validate_spec(const ExperimentSpec& spec) {
  if (spec.n_grid.empty()) throw std::invalid_argument("n_grid must be non-empty");
  for (std::size_t i = 0; i + 1 < spec.n_grid.size(); ++i)
    if (spec.n_grid[i] >= spec.n_grid[i + 1])
      throw std::invalid_argument("n_grid must be strictly increasing");
  if (spec.n_grid.front() < 1) throw std::invalid_argument("n_grid entries must be >= 1");
  if (spec.k < 1) throw std::invalid_argument("alphabet size must be >= 1");
  if (!spec.exhaustive && spec.samples < 1)
    throw std::invalid_argument("samples must be >= 1");
}

ExperimentRow finish_row(State n, std::int64_t trials, std::int64_t successes) {
  ExperimentRow row;
  row.n = n;
  row.trials = trials;
  row.successes = successes;
  row.frequency = trials > 0 ? double(successes) / double(trials) : 0.0;
  std::tie(row.wilson_lo, row.wilson_hi) = wilson_interval(successes, trials);
  return row;
}

}  // namespace

ExperimentReport run_experiment(const ExperimentSpec& spec, int workers) {
  validate_spec(spec);
  const auto t0 = std::chrono::steady_clock::now();

#ifdef _OPENMP
  const int threads = workers <= 0 ? omp_get_max_threads() : workers;
#else
  const int threads = 1;
  (void)workers;
#endif

  ExperimentReport rep;
  rep.spec = spec;
  for (State n : spec.n_grid) {
    std::int64_t successes = 0;
    std::int64_t trials;
    if (spec.exhaustive) {
      trials = 0;
      enumerate_all(n, spec.k, [&](const Dfa& d) {
        ++trials;
        if (metric_indicator(spec, d)) ++successes;
      });
    } else {
      trials = spec.samples;
      if (threads == 1) {
        for (std::int64_t t = 0; t < trials; ++t) {
          Rng rng = Rng::derive(spec.seed, std::uint64_t(n), std::uint64_t(t));
          const Dfa d = random_dfa(n, spec.k, rng);
          if (metric_indicator(spec, d)) ++successes;
        }
      } else {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 64) num_threads(threads) reduction(+ : successes)
        for (std::int64_t t = 0; t < trials; ++t) {
          Rng rng = Rng::derive(spec.seed, std::uint64_t(n), std::uint64_t(t));
          const Dfa d = random_dfa(n, spec.k, rng);
          if (metric_indicator(spec, d)) ++successes;
        }
#endif
      }
    }
    rep.rows.push_back(finish_row(n, trials, successes));
  }

  if (rep.rows.size() >= 3 &&
      std::all_of(rep.rows.begin(), rep.rows.end(),
                  [](const ExperimentRow& r) { return r.frequency > 0.0; })) {
    std::vector<std::pair<double, double>> pts;
    for (const ExperimentRow& r : rep.rows) pts.emplace_back(double(r.n), r.frequency);
    rep.fit = fit_loglog(pts);
  }

  rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

SmallCaseCounts exact_small_n(State n, Letter k) {
  SmallCaseCounts c;
  c.n = n;
  c.k = k;
  c.total = enumerate_all(n, k, [&](const Dfa& d) {
    if (decide_exact(d).synchronizing) ++c.synchronizing;
    if (!is_weakly_connected(d)) ++c.not_weakly_connected;
    if (exactly_one_disconnected_state(d)) ++c.one_disconnected;
  });
  return c;
}

std::pair<double, double> wilson_interval(std::int64_t successes, std::int64_t trials, double z) {
  if (trials < 1 || successes < 0 || successes > trials)
    throw std::invalid_argument("need 0 <= successes <= trials, trials >= 1");
  if (z <= 0) throw std::invalid_argument("z must be positive");
  const double nt = double(trials);
  const double p = double(successes) / nt;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nt;
  const double center = (p + z2 / (2.0 * nt)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / nt + z2 / (4.0 * nt * nt)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

SlopeFit fit_loglog(std::span<const std::pair<double, double>> points) {
  if (points.size() < 3) throw std::invalid_argument("log-log fit needs >= 3 points");
  for (const auto& [x, y] : points) {
    if (x <= 0.0) throw std::invalid_argument("log-log fit needs positive x");
    if (y <= 0.0)
      throw std::invalid_argument(
          "log-log fit needs positive frequencies; increase samples or drop the zero point");
  }
  const std::size_t m = points.size();
  double sx = 0, sy = 0;
  for (const auto& [x, y] : points) {
    sx += std::log(x);
    sy += std::log(y);
  }
  const double mx = sx / double(m), my = sy / double(m);
  double sxx = 0, sxy = 0;
  for (const auto& [x, y] : points) {
    const double dx = std::log(x) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(y) - my);
  }
  SlopeFit fit;
  fit.points = int(m);
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0;
  for (const auto& [x, y] : points) {
    const double r = std::log(y) - (fit.intercept + fit.slope * std::log(x));
    ss_res += r * r;
  }
  fit.stderr_slope = m > 2 ? std::sqrt(ss_res / double(m - 2) / sxx) : 0.0;
  return fit;
}

std::string report_to_json(const ExperimentReport& rep, bool include_timing) {
  nlohmann::ordered_json j;
  j["metric"] = metric_name(rep.spec.metric);
  j["k"] = rep.spec.k;
  j["seed"] = rep.spec.seed;
  j["samples"] = rep.spec.samples;
  j["exhaustive"] = rep.spec.exhaustive;
  j["budget_scale"] = rep.spec.budget_scale;
  j["rows"] = nlohmann::ordered_json::array();
  for (const ExperimentRow& r : rep.rows) {
    nlohmann::ordered_json row;
    row["n"] = r.n;
    row["trials"] = r.trials;
    row["successes"] = r.successes;
    row["freq"] = r.frequency;
    row["wilson_lo"] = r.wilson_lo;
    row["wilson_hi"] = r.wilson_hi;
    j["rows"].push_back(std::move(row));
  }
  if (rep.fit) {
    nlohmann::ordered_json f;
    f["slope"] = rep.fit->slope;
    f["intercept"] = rep.fit->intercept;
    f["stderr"] = rep.fit->stderr_slope;
    f["points"] = rep.fit->points;
    j["slope_fit"] = std::move(f);
  } else {
    j["slope_fit"] = nullptr;
  }
  if (include_timing) j["wall_seconds"] = rep.wall_seconds;
  return j.dump(2);
}

std::string report_to_csv(const ExperimentReport& rep) {
  std::string out = "metric,n,trials,successes,freq,wilson_lo,wilson_hi\n";
  char buf[160];
  for (const ExperimentRow& r : rep.rows) {
    std::snprintf(buf, sizeof buf, "%s,%d,%lld,%lld,%.17g,%.17g,%.17g\n",
                  metric_name(rep.spec.metric), int(r.n), (long long)r.trials,
                  (long long)r.successes, r.frequency, r.wilson_lo, r.wilson_hi);
    out += buf;
  }
  return out;
}

}  // namespace syncauto
