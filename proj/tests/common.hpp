#pragma once

// Shared fixtures and re-verification helpers for the unit and acceptance
// suites. Certificate checks here stay independent of the code paths that
// produced the certificates: reset words are replayed by image iteration,
// deadlock pairs by a full forward closure, disconnections by edge scans.

#include <algorithm>
#include <set>
#include <vector>

#include "syncauto/dfa.hpp"
#include "syncauto/fast_decide.hpp"
#include "syncauto/funcgraph.hpp"
#include "syncauto/oracle.hpp"

namespace syncauto::testing {

// The 4-state circular automaton: letter 0 is the 4-cycle, letter 1 fixes
// everything except the last state, which it sends to 0.
inline Dfa c4() { return Dfa(4, 2, {1, 2, 3, 0, 0, 1, 2, 0}); }

inline Dfa make2(State n, std::vector<State> row_a, std::vector<State> row_b) {
  std::vector<State> delta = std::move(row_a);
  delta.insert(delta.end(), row_b.begin(), row_b.end());
  return Dfa(n, 2, std::move(delta));
}

// |Q.w| == 1, checked by plain image iteration.
inline bool verify_reset_word(const Dfa& d, const Word& w) {
  std::vector<State> s(d.n);
  for (State q = 0; q < d.n; ++q) s[q] = q;
  for (Letter x : w) s = image(d, s, x);
  return s.size() == 1;
}

// Exhaustive forward closure: true iff no word merges p and q.
inline bool verify_deadlock_pair(const Dfa& d, State p, State q) {
  if (p == q) return false;
  const MergeProbe probe = budgeted_pair_merge(d, p, q, ~std::uint64_t(0));
  return probe.outcome == MergeOutcome::deadlock;
}

// Labeling has >= 2 classes and no edge crosses classes.
inline bool verify_disconnected(const Dfa& d, const DisconnectedCert& c) {
  if (c.count < 2 || std::int32_t(c.label.size()) != d.n) return false;
  for (State q = 0; q < d.n; ++q)
    for (Letter x = 0; x < d.k; ++x)
      if (c.label[q] != c.label[d.step(q, x)]) return false;
  return std::set<std::int32_t>(c.label.begin(), c.label.end()).size() >= 2;
}

inline bool verify_verdict(const Dfa& d, const Verdict& v) {
  if (v.synchronizing) {
    if (!std::holds_alternative<ResetWordCert>(v.certificate)) return false;
    return verify_reset_word(d, std::get<ResetWordCert>(v.certificate).word);
  }
  if (std::holds_alternative<DeadlockPairCert>(v.certificate)) {
    const auto& c = std::get<DeadlockPairCert>(v.certificate);
    return verify_deadlock_pair(d, c.p, c.q);
  }
  if (std::holds_alternative<DisconnectedCert>(v.certificate))
    return verify_disconnected(d, std::get<DisconnectedCert>(v.certificate));
  return false;
}

// States reachable from `from` under all letters.
inline std::vector<State> forward_closure(const Dfa& d, const std::vector<State>& from) {
  std::vector<std::uint8_t> seen(d.n, 0);
  std::vector<State> queue;
  for (State q : from)
    if (!seen[q]) {
      seen[q] = 1;
      queue.push_back(q);
    }
  for (std::size_t head = 0; head < queue.size(); ++head)
    for (Letter x = 0; x < d.k; ++x) {
      const State t = d.step(queue[head], x);
      if (!seen[t]) {
        seen[t] = 1;
        queue.push_back(t);
      }
    }
  std::sort(queue.begin(), queue.end());
  return queue;
}

}  // namespace syncauto::testing
