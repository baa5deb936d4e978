#pragma once

// Exact ground truth for synchronizability: breadth-first analysis of the
// pair automaton (mergeable / deadlock / stable pairs), decision with
// machine-checkable certificates, greedy and shortest reset words, maximum
// deadlock cliques, and exhaustive enumeration of all automata at tiny n.

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "syncauto/dfa.hpp"

namespace syncauto {

using StatePair = std::pair<State, State>;  // unordered, stored with first < second

inline std::int64_t pair_count(State n) { return std::int64_t(n) * (n - 1) / 2; }

// Triangular index of {p, q} with p < q.
inline std::int64_t pair_index(State n, State p, State q) {
  return std::int64_t(p) * (2 * std::int64_t(n) - p - 1) / 2 + (q - p - 1);
}

inline StatePair make_pair_sorted(State p, State q) {
  return p < q ? StatePair{p, q} : StatePair{q, p};
}

// Distances to the merged diagonal in the pair automaton, computed by one
// backward BFS from all one-step-merged pairs. dist is -1 for deadlock
// pairs; letter[i] starts a shortest merging word. O(k n^2) time and
// O(n^2) memory, refused above n = 20000.
struct MergeTable {
  State n = 0;
  std::vector<std::int32_t> dist;
  std::vector<std::int8_t> letter;
  std::uint64_t edges = 0;  // pair edges generated (the charged work)
  bool all_mergeable = false;
};

MergeTable merge_table(const Dfa& d);

// Mergeable / deadlock / stable classification of every unordered pair.
// A pair is stable iff no deadlock pair is forward-reachable from it in the
// pair automaton; stable pairs are closed under the letters and every stable
// pair is mergeable.
struct PairGraphResult {
  State n = 0;
  std::vector<std::uint8_t> mergeable;  // triangular, by pair_index
  std::vector<std::uint8_t> stable;     // triangular, by pair_index
  std::vector<StatePair> deadlock_pairs;  // lexicographic
  std::vector<StatePair> stable_pairs;    // lexicographic

  bool is_mergeable(State p, State q) const {
    auto [a, b] = make_pair_sorted(p, q);
    return mergeable[pair_index(n, a, b)] != 0;
  }
  bool is_stable(State p, State q) const {
    auto [a, b] = make_pair_sorted(p, q);
    return stable[pair_index(n, a, b)] != 0;
  }
  bool synchronizing() const { return deadlock_pairs.empty(); }
};

PairGraphResult pair_graph_analysis(const Dfa& d);

// Decision certificates. A reset word w satisfies |Q.w| = 1; a disconnection
// is a weak-component labeling with >= 2 classes; a deadlock pair never
// merges under any word. All three are re-checkable against the automaton.
struct ResetWordCert {
  Word word;
};
struct DisconnectedCert {
  std::vector<std::int32_t> label;
  std::int32_t count = 0;
};
struct DeadlockPairCert {
  State p = 0, q = 0;
};

struct Verdict {
  bool synchronizing = false;
  std::variant<ResetWordCert, DisconnectedCert, DeadlockPairCert> certificate;
  std::string method;       // "exact" or "fast"
  std::uint64_t steps = 0;  // charged elementary operations
  bool fallback = false;    // fast pipeline delegated to the exact oracle
  std::uint64_t budget = 0; // total fast-path allowance (0 for plain exact)
};

// Weak-connectivity check, then the pair table. YES carries a greedy reset
// word; NO carries the disconnection or the smallest deadlock pair.
Verdict decide_exact(const Dfa& d);

// Shortest word merging p and q, or nullopt iff {p, q} is a deadlock pair.
std::optional<Word> merge_word(const Dfa& d, State p, State q);

// Greedy reset word: repeatedly merge the pair of the current image set with
// the smallest merge distance (ties to the smallest pair), using one
// backward BFS for all distances. nullopt iff not synchronizing.
std::optional<Word> greedy_reset_word(const Dfa& d);

// Minimum-length reset word by BFS over the subset automaton; n <= 16.
std::optional<Word> shortest_reset_word(const Dfa& d);

// All maximum cliques of the deadlock-pair graph; n <= 12. Without deadlock
// pairs the maximum size is 1 and every singleton is listed.
struct FCliqueSet {
  std::vector<std::vector<State>> cliques;  // each sorted; list lexicographic
  std::int32_t size = 0;
};

FCliqueSet f_cliques(const Dfa& d);

// Largest table count accepted by enumerate_all.
inline constexpr std::uint64_t kEnumerationLimit = 100'000'000;

// Number of automata with n states and k letters, or a CapacityError beyond
// the enumeration limit.
std::uint64_t enumeration_count(State n, Letter k);

// Visits every transition table exactly once, in lexicographic order of the
// flat letter-major table. Returns the number visited.
template <class Visitor>
std::uint64_t enumerate_all(State n, Letter k, Visitor&& visit) {
  enumeration_count(n, k);
  Dfa d(n, k);
  const std::size_t cells = d.delta.size();
  std::uint64_t count = 0;
  for (;;) {
    visit(static_cast<const Dfa&>(d));
    ++count;
    std::size_t i = cells;
    while (i > 0 && d.delta[i - 1] == n - 1) d.delta[--i] = 0;
    if (i == 0) break;
    ++d.delta[i - 1];
  }
  return count;
}

// The chain {p,q}, {p.x,q.x}, ..., {p.x^length, q.x^length}, truncated just
// before the first step where the two components coincide.
std::vector<StatePair> propagate_pairs(const Dfa& d, StatePair seed, Letter x,
                                       std::int64_t length);

}  // namespace syncauto
