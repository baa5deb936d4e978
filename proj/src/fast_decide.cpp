#include "syncauto/fast_decide.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace syncauto {

std::optional<CandidatePair> candidate_stable_pair(const Dfa& d, const LetterGraph& lg) {
  const HighTreeStats st = high_tree_stats(lg);
  if (!st.unique_highest || st.margin < 1 || st.h1 < 1) return std::nullopt;
  CandidatePair c;
  c.letter = lg.letter;
  c.h = st.h1;
  c.p_high = -1;
  for (State q = 0; q < lg.n; ++q)
    if (lg.level[q] == st.h1) {
      c.p_high = q;
      break;
    }
  State p = c.p_high;
  for (std::int32_t i = 0; i < c.h - 1; ++i) p = lg.succ[p];
  c.p = p;
  const State root = lg.tree_root[c.p_high];
  const ClusterInfo& ci = lg.clusters[lg.cluster_id[root]];
  const std::int32_t s = ci.cycle_length;
  c.q = ci.cycle_states[(lg.cycle_pos[root] + s - 1) % s];
  c.pair = make_pair_sorted(c.p, c.q);
  return c;
}

std::optional<CandidatePair> candidate_stable_pair(const Dfa& d, Letter x) {
  return candidate_stable_pair(d, analyze_letter(d, x));
}

MergeProbe budgeted_pair_merge(const Dfa& d, State p, State q, std::uint64_t budget) {
  if (p == q) throw std::invalid_argument("states must be distinct");
  MergeProbe r;
  auto pack = [](State a, State b) { return (std::uint64_t(a) << 32) | std::uint32_t(b); };
  const std::uint64_t start = p < q ? pack(p, q) : pack(q, p);
  std::unordered_map<std::uint64_t, std::pair<std::uint64_t, std::int8_t>> came_from;
  came_from.emplace(start, std::make_pair(start, std::int8_t(-1)));
  std::vector<std::uint64_t> queue{start};
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const std::uint64_t cur = queue[head];
    const State a = State(cur >> 32), b = State(std::uint32_t(cur));
    for (Letter x = 0; x < d.k; ++x) {
      if (r.edges == budget) {
        r.outcome = MergeOutcome::exhausted;
        return r;
      }
      ++r.edges;
      const State u = d.step(a, x), v = d.step(b, x);
      if (u == v) {
        r.outcome = MergeOutcome::merged;
        r.word.push_back(x);
        for (std::uint64_t at = cur; at != start; at = came_from[at].first)
          r.word.push_back(came_from[at].second);
        std::reverse(r.word.begin(), r.word.end());
        return r;
      }
      const std::uint64_t key = u < v ? pack(u, v) : pack(v, u);
      if (came_from.emplace(key, std::make_pair(cur, std::int8_t(x))).second)
        queue.push_back(key);
    }
  }
  r.outcome = MergeOutcome::deadlock;  // closure fully explored, no merge exists
  return r;
}

Verdict fast_decide(const Dfa& d, const BudgetPolicy& policy) {
  Verdict v;
  v.method = "fast";
  const State n = d.n;
  const std::uint64_t probe_budget =
      std::uint64_t(std::ceil(policy.probe_per_n * policy.scale * n));
  const std::uint64_t merge_budget =
      std::uint64_t(std::ceil(policy.merge_per_n * policy.scale * n));
  const std::uint64_t total_budget =
      std::uint64_t(std::ceil(policy.total_coeff * policy.scale * std::pow(double(n), 1.5)));
  v.budget = total_budget;

  auto fall_back = [&](std::uint64_t spent) {
    Verdict e = decide_exact(d);
    e.fallback = true;
    e.steps += spent;
    e.budget = total_budget;
    return e;
  };

  const WeakComponents wc = weak_components(d);
  v.steps += wc.ops;
  if (!wc.connected) {
    v.synchronizing = false;
    v.certificate = DisconnectedCert{wc.label, wc.count};
    return v;
  }
  if (n == 1) {
    v.synchronizing = true;
    v.certificate = ResetWordCert{{}};
    return v;
  }

  // Pick the letter whose unique highest tree has the larger margin.
  std::optional<CandidatePair> cand;
  std::optional<LetterGraph> cand_graph;
  std::int32_t cand_margin = -1;
  for (Letter x = 0; x < d.k; ++x) {
    LetterGraph lg = analyze_letter(d, x);
    v.steps += n;
    auto c = candidate_stable_pair(d, lg);
    if (!c) continue;
    const std::int32_t margin = high_tree_stats(lg).margin;
    if (margin > cand_margin) {
      cand_margin = margin;
      cand = c;
      cand_graph = std::move(lg);
    }
  }
  if (!cand) return fall_back(v.steps);

  const MergeProbe probe = budgeted_pair_merge(d, cand->p, cand->q, probe_budget);
  v.steps += probe.edges;
  if (probe.outcome == MergeOutcome::deadlock) {
    v.synchronizing = false;
    v.certificate = DeadlockPairCert{cand->pair.first, cand->pair.second};
    return v;
  }
  if (probe.outcome == MergeOutcome::exhausted) return fall_back(v.steps);

  // Collapse: x^n maps Q onto the cyclic states of x, then merge survivors
  // two at a time. All collapse work is charged against the global budget.
  const Letter x = cand->letter;
  const LetterGraph& lg = *cand_graph;
  Word word(std::size_t(n), x);
  v.steps += n;
  std::uint64_t spent = n;

  std::vector<State> s;
  for (State q = 0; q < n; ++q)
    if (lg.is_cyclic(q)) s.push_back(q);

  std::vector<std::int32_t> stamp(n, -1);
  std::int32_t epoch = 0;
  while (s.size() > 1) {
    if (spent >= total_budget) return fall_back(v.steps);
    const std::uint64_t allow = std::min<std::uint64_t>(merge_budget, total_budget - spent);
    const MergeProbe mr = budgeted_pair_merge(d, s[0], s[1], allow);
    v.steps += mr.edges;
    spent += mr.edges;
    if (mr.outcome == MergeOutcome::deadlock) {
      v.synchronizing = false;
      v.certificate = DeadlockPairCert{s[0], s[1]};
      return v;
    }
    if (mr.outcome == MergeOutcome::exhausted) return fall_back(v.steps);
    for (Letter y : mr.word) {
      ++epoch;
      std::size_t out = 0;
      for (State q : s) {
        const State t = d.step(q, y);
        if (stamp[t] != epoch) {
          stamp[t] = epoch;
          s[out++] = t;
        }
      }
      v.steps += s.size();
      spent += s.size();
      s.resize(out);
    }
    std::sort(s.begin(), s.end());
    word.insert(word.end(), mr.word.begin(), mr.word.end());
  }

  v.synchronizing = true;
  v.certificate = ResetWordCert{std::move(word)};
  return v;
}

std::vector<StatePair> harvest_stable_pairs(const Dfa& d, StatePair seed, std::int64_t want) {
  std::vector<StatePair> out;
  if (want <= 0) return out;
  State p = seed.first, q = seed.second;
  if (p == q) throw std::invalid_argument("seed states must be distinct");
  out.push_back(make_pair_sorted(p, q));
  // Alternate the letters along one chain; duplicates are skipped, and a
  // hard step cap guards against closed orbits that never produce new pairs.
  std::vector<StatePair> seen = out;
  Letter x = 0;
  const std::int64_t cap = std::max<std::int64_t>(4 * want, 64);
  for (std::int64_t step = 0; step < cap && std::int64_t(out.size()) < want; ++step) {
    p = d.step(p, x);
    q = d.step(q, x);
    if (p == q) break;
    const StatePair pr = make_pair_sorted(p, q);
    if (std::find(seen.begin(), seen.end(), pr) == seen.end()) {
      seen.push_back(pr);
      out.push_back(pr);
    }
    x = Letter((x + 1) % d.k);
  }
  return out;
}

}  // namespace syncauto
