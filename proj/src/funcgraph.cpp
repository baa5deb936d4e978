#include "syncauto/funcgraph.hpp"

#include <algorithm>
#include <cmath>

namespace syncauto {

LetterGraph analyze_letter(const Dfa& d, Letter x) {
  if (x < 0 || x >= d.k) throw std::invalid_argument("letter out of range");
  const State n = d.n;
  const State* f = d.delta.data() + std::size_t(x) * n;

  LetterGraph lg;
  lg.n = n;
  lg.letter = x;
  lg.succ.assign(f, f + n);
  lg.cluster_id.assign(n, -1);
  lg.level.assign(n, -1);
  lg.tree_root.assign(n, -1);
  lg.cycle_pos.assign(n, -1);
  lg.root_height.assign(n, -1);

  // Locate the cycles: chase pointers from each unfinished state; a walk
  // either closes on itself (new cycle) or runs into finished territory.
  std::vector<std::int32_t> walk_id(n, -1), walk_pos(n, 0);
  std::vector<std::uint8_t> done(n, 0);
  std::vector<State> path;
  for (State start = 0; start < n; ++start) {
    if (done[start]) continue;
    path.clear();
    State cur = start;
    while (!done[cur] && walk_id[cur] != start) {
      walk_id[cur] = start;
      walk_pos[cur] = std::int32_t(path.size());
      path.push_back(cur);
      cur = f[cur];
    }
    if (!done[cur]) {
      // path[walk_pos[cur]..] is a fresh cycle.
      const std::int32_t cid = std::int32_t(lg.clusters.size());
      std::vector<State> cyc(path.begin() + walk_pos[cur], path.end());
      const auto mn = std::min_element(cyc.begin(), cyc.end());
      std::rotate(cyc.begin(), mn, cyc.end());
      ClusterInfo ci;
      ci.cycle_length = std::int32_t(cyc.size());
      for (std::int32_t i = 0; i < ci.cycle_length; ++i) {
        const State c = cyc[i];
        lg.cluster_id[c] = cid;
        lg.level[c] = 0;
        lg.tree_root[c] = c;
        lg.cycle_pos[c] = i;
        lg.root_height[c] = 0;
      }
      ci.cycle_states = std::move(cyc);
      lg.clusters.push_back(std::move(ci));
    }
    for (State s : path) done[s] = 1;
  }

  // Preimage lists (CSR), then a reverse BFS from the cycles assigns level,
  // cluster and tree root to every tree vertex.
  std::vector<std::int32_t> off(n + 1, 0);
  for (State q = 0; q < n; ++q) ++off[f[q] + 1];
  for (State q = 0; q < n; ++q) off[q + 1] += off[q];
  std::vector<State> pre(n);
  {
    std::vector<std::int32_t> fill(off.begin(), off.end() - 1);
    for (State q = 0; q < n; ++q) pre[fill[f[q]]++] = q;
  }
  std::vector<State> queue;
  queue.reserve(n);
  for (const ClusterInfo& ci : lg.clusters)
    for (State c : ci.cycle_states) queue.push_back(c);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const State v = queue[head];
    for (std::int32_t i = off[v]; i < off[v + 1]; ++i) {
      const State p = pre[i];
      if (lg.level[p] >= 0) continue;  // cyclic predecessors are already done
      lg.level[p] = lg.level[v] + 1;
      lg.cluster_id[p] = lg.cluster_id[v];
      lg.tree_root[p] = lg.level[v] == 0 ? v : lg.tree_root[v];
      const State r = lg.tree_root[p];
      if (lg.level[p] > lg.root_height[r]) lg.root_height[r] = lg.level[p];
      queue.push_back(p);
    }
  }

  for (State q = 0; q < n; ++q) ++lg.clusters[lg.cluster_id[q]].size;
  lg.tree_heights.reserve(n);
  for (const ClusterInfo& ci : lg.clusters)
    for (State c : ci.cycle_states) lg.tree_heights.push_back(lg.root_height[c]);
  std::sort(lg.tree_heights.begin(), lg.tree_heights.end(), std::greater<>());
  return lg;
}

HighTreeStats high_tree_stats(const LetterGraph& lg) {
  HighTreeStats st;
  st.h1 = lg.tree_heights.front();
  st.h2 = lg.tree_heights.size() > 1 ? lg.tree_heights[1] : -1;
  st.unique_highest = lg.tree_heights.size() == 1 || lg.tree_heights[1] < st.h1;
  st.margin = st.h1 - st.h2;
  for (std::int32_t lv : lg.level) {
    if (lv == st.h2 + 1) ++st.n1;
    if (lv >= st.h2 + 2) ++st.n2;
  }
  return st;
}

namespace {

// size > n^theta, robust at integer boundaries: when n^theta is (numerically)
// an integer the comparison is done in integers.
bool cluster_is_big(std::int64_t size, std::int64_t n, double theta) {
  const long double x = std::pow((long double)n, (long double)theta);
  const long double r = std::nearbyint(x);
  if (std::abs(x - r) < 1e-9L) return size > (std::int64_t)r;
  return (long double)size > x;
}

}  // namespace

ClusterPartition cluster_partition(const LetterGraph& lg, double theta) {
  if (!(theta > 0.0 && theta < 1.0)) throw std::invalid_argument("exponent must be in (0, 1)");
  ClusterPartition cp;
  cp.threshold_exponent = theta;
  std::vector<std::uint8_t> big(lg.clusters.size(), 0);
  for (std::size_t c = 0; c < lg.clusters.size(); ++c) {
    if (cluster_is_big(lg.clusters[c].size, lg.n, theta)) {
      big[c] = 1;
      cp.big_clusters.push_back(std::int32_t(c));
    }
  }
  for (State q = 0; q < lg.n; ++q)
    if (!big[lg.cluster_id[q]]) cp.small_states.push_back(q);
  cp.small_count = std::int64_t(cp.small_states.size());
  return cp;
}

State eventual_cycle_vertex(const LetterGraph& lg, State q, std::int64_t t) {
  if (q < 0 || q >= lg.n) throw std::invalid_argument("state out of range");
  const std::int32_t lv = lg.level[q];
  if (t < lv) throw std::invalid_argument("step count below the state's level");
  State c = q;
  for (std::int32_t i = 0; i < lv; ++i) c = lg.succ[c];
  const ClusterInfo& ci = lg.clusters[lg.cluster_id[q]];
  const std::int64_t s = ci.cycle_length;
  const std::int64_t pos = (lg.cycle_pos[c] + (t - lv) % s) % s;
  return ci.cycle_states[pos];
}

bool clusters_connected_by_pairs(const LetterGraph& lg,
                                 std::span<const std::pair<State, State>> pairs, double theta) {
  const ClusterPartition cp = cluster_partition(lg, theta);
  if (cp.big_clusters.size() <= 1) return true;
  std::vector<std::int32_t> vertex(lg.clusters.size(), -1);
  for (std::size_t i = 0; i < cp.big_clusters.size(); ++i) vertex[cp.big_clusters[i]] = std::int32_t(i);

  std::vector<std::int32_t> parent(cp.big_clusters.size());
  for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = std::int32_t(i);
  auto find = [&](std::int32_t a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  std::int32_t groups = std::int32_t(parent.size());
  for (const auto& [p, q] : pairs) {
    const std::int32_t cp1 = vertex[lg.cluster_id[p]];
    const std::int32_t cp2 = vertex[lg.cluster_id[q]];
    if (cp1 < 0 || cp2 < 0) continue;
    const std::int32_t a = find(cp1), b = find(cp2);
    if (a != b) {
      parent[a] = b;
      --groups;
    }
  }
  return groups == 1;
}

}  // namespace syncauto
