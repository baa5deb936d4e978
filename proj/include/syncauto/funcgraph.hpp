#pragma once

// Decomposition of one letter's functional graph into clusters (weakly
// connected components), each holding a unique cycle with trees hanging off
// the cyclic vertices. Levels measure the distance to the cycle; the height
// of a tree is the largest level inside it. Built in O(n).

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "syncauto/dfa.hpp"

namespace syncauto {

struct ClusterInfo {
  std::int32_t size = 0;
  std::int32_t cycle_length = 0;
  std::vector<State> cycle_states;  // in successor order, starting at the smallest
};

struct LetterGraph {
  State n = 0;
  Letter letter = 0;
  std::vector<State> succ;                // copy of the letter's row
  std::vector<std::int32_t> cluster_id;   // per state
  std::vector<std::int32_t> level;        // per state; 0 iff on the cycle
  std::vector<State> tree_root;           // cyclic vertex whose tree holds the state
  std::vector<std::int32_t> cycle_pos;    // index into the cluster's cycle_states; -1 off-cycle
  std::vector<std::int32_t> root_height;  // per state: height of the tree rooted there; -1 off-cycle
  std::vector<ClusterInfo> clusters;
  std::vector<std::int32_t> tree_heights; // one entry per cyclic vertex, sorted descending

  bool is_cyclic(State q) const { return level[q] == 0; }
  std::int32_t cyclic_count() const { return std::int32_t(tree_heights.size()); }
};

LetterGraph analyze_letter(const Dfa& d, Letter x);

// Number of clusters (equivalently, of cycles).
inline std::int32_t cycle_count(const LetterGraph& lg) { return std::int32_t(lg.clusters.size()); }

// Statistics of the two highest trees. h2 is -1 when the letter has exactly
// one tree; then n1 counts level-0 vertices and n2 counts levels >= 1, which
// keeps the h2+1 / h2+2 thresholds total.
struct HighTreeStats {
  std::int32_t h1 = 0;
  std::int32_t h2 = -1;
  bool unique_highest = false;
  std::int32_t margin = 0;   // h1 - h2
  std::int64_t n1 = 0;       // vertices at level h2 + 1
  std::int64_t n2 = 0;       // vertices at levels >= h2 + 2
};

HighTreeStats high_tree_stats(const LetterGraph& lg);

// Split of the clusters at size n^theta: ids of the big clusters and the
// states of all small ones.
struct ClusterPartition {
  double threshold_exponent = 0.45;
  std::vector<std::int32_t> big_clusters;  // ascending cluster ids
  std::vector<State> small_states;         // ascending
  std::int64_t small_count = 0;
};

ClusterPartition cluster_partition(const LetterGraph& lg, double theta = 0.45);

// q.x^t for t >= level(q), in O(level(q)) time: walk to the cycle, then jump
// along the stored cyclic order.
State eventual_cycle_vertex(const LetterGraph& lg, State q, std::int64_t t);

// Contract the pairs onto the big clusters (pairs touching small clusters
// are ignored) and report whether the resulting graph is connected.
// Vacuously true with at most one big cluster.
bool clusters_connected_by_pairs(const LetterGraph& lg,
                                 std::span<const std::pair<State, State>> pairs,
                                 double theta = 0.45);

}  // namespace syncauto
