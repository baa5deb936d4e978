#include "syncauto/oracle.hpp"

#include <algorithm>
#include <bit>
#include <queue>
#include <unordered_map>

namespace syncauto {

namespace {

constexpr State kPairTableMaxStates = 20000;

void check_pair_capacity(State n) {
  if (n > kPairTableMaxStates)
    throw CapacityError("pair table needs n(n-1)/2 entries; refusing n > " +
                        std::to_string(kPairTableMaxStates));
}

// Preimage lists of every letter, CSR layout. Bucket entries are ascending.
struct Preimages {
  State n;
  std::vector<std::int32_t> off;  // k rows of n+1 offsets
  std::vector<State> data;        // k rows of n entries

  Preimages(const Dfa& d) : n(d.n), off(std::size_t(d.k) * (d.n + 1), 0), data(d.delta.size()) {
    for (Letter x = 0; x < d.k; ++x) {
      std::int32_t* o = row_off(x);
      for (State q = 0; q < n; ++q) ++o[d.step(q, x) + 1];
      for (State t = 0; t < n; ++t) o[t + 1] += o[t];
      std::vector<std::int32_t> fill(o, o + n);
      State* buf = data.data() + std::size_t(x) * n;
      for (State q = 0; q < n; ++q) buf[fill[d.step(q, x)]++] = q;
    }
  }

  std::int32_t* row_off(Letter x) { return off.data() + std::size_t(x) * (n + 1); }
  const std::int32_t* row_off(Letter x) const { return off.data() + std::size_t(x) * (n + 1); }
  std::span<const State> bucket(Letter x, State target) const {
    const std::int32_t* o = row_off(x);
    return {data.data() + std::size_t(x) * n + o[target], std::size_t(o[target + 1] - o[target])};
  }
};

std::uint64_t pack(State p, State q) { return (std::uint64_t(p) << 32) | std::uint32_t(q); }

}  // namespace

MergeTable merge_table(const Dfa& d) {
  check_pair_capacity(d.n);
  const State n = d.n;
  MergeTable mt;
  mt.n = n;
  const std::int64_t total = pair_count(n);
  mt.dist.assign(total, -1);
  mt.letter.assign(total, -1);

  const Preimages pre(d);
  std::vector<std::uint64_t> queue;
  queue.reserve(total);

  // Seeds: pairs merged by one letter, i.e. co-preimages of one state.
  for (Letter x = 0; x < d.k; ++x) {
    for (State t = 0; t < n; ++t) {
      const auto b = pre.bucket(x, t);
      for (std::size_t i = 0; i < b.size(); ++i) {
        for (std::size_t j = i + 1; j < b.size(); ++j) {
          ++mt.edges;
          const std::int64_t idx = pair_index(n, b[i], b[j]);
          if (mt.dist[idx] < 0) {
            mt.dist[idx] = 1;
            mt.letter[idx] = std::int8_t(x);
            queue.push_back(pack(b[i], b[j]));
          }
        }
      }
    }
  }

  for (std::size_t head = 0; head < queue.size(); ++head) {
    const State u = State(queue[head] >> 32);
    const State v = State(std::uint32_t(queue[head]));
    const std::int32_t du = mt.dist[pair_index(n, u, v)];
    for (Letter x = 0; x < d.k; ++x) {
      const auto bu = pre.bucket(x, u);
      const auto bv = pre.bucket(x, v);
      for (State p : bu) {
        for (State q : bv) {
          ++mt.edges;
          if (p == q) continue;
          const std::int64_t idx = p < q ? pair_index(n, p, q) : pair_index(n, q, p);
          if (mt.dist[idx] < 0) {
            mt.dist[idx] = du + 1;
            mt.letter[idx] = std::int8_t(x);
            queue.push_back(p < q ? pack(p, q) : pack(q, p));
          }
        }
      }
    }
  }

  mt.all_mergeable = std::int64_t(queue.size()) == total;
  return mt;
}

PairGraphResult pair_graph_analysis(const Dfa& d) {
  const MergeTable mt = merge_table(d);
  const State n = d.n;
  const std::int64_t total = pair_count(n);

  PairGraphResult r;
  r.n = n;
  r.mergeable.assign(total, 0);
  for (std::int64_t i = 0; i < total; ++i) r.mergeable[i] = mt.dist[i] >= 0;

  // A pair is unstable iff a deadlock pair is forward-reachable from it:
  // backward closure of the deadlock set over reversed pair edges.
  std::vector<std::uint8_t> bad(total, 0);
  std::vector<std::uint64_t> queue;
  for (State p = 0; p < n; ++p) {
    for (State q = p + 1; q < n; ++q) {
      const std::int64_t idx = pair_index(n, p, q);
      if (mt.dist[idx] < 0) {
        bad[idx] = 1;
        queue.push_back(pack(p, q));
        r.deadlock_pairs.push_back({p, q});
      }
    }
  }
  const Preimages pre(d);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const State u = State(queue[head] >> 32);
    const State v = State(std::uint32_t(queue[head]));
    for (Letter x = 0; x < d.k; ++x) {
      const auto bu = pre.bucket(x, u);
      const auto bv = pre.bucket(x, v);
      for (State p : bu) {
        for (State q : bv) {
          if (p == q) continue;
          const std::int64_t idx = p < q ? pair_index(n, p, q) : pair_index(n, q, p);
          if (!bad[idx]) {
            bad[idx] = 1;
            queue.push_back(p < q ? pack(p, q) : pack(q, p));
          }
        }
      }
    }
  }

  r.stable.assign(total, 0);
  for (State p = 0; p < n; ++p)
    for (State q = p + 1; q < n; ++q) {
      const std::int64_t idx = pair_index(n, p, q);
      if (!bad[idx]) {
        r.stable[idx] = 1;
        r.stable_pairs.push_back({p, q});
      }
    }
  return r;
}

namespace {

// Shortest merging word for {p, q} read out of the table; appends to `out`
// and returns the merged state. Charges 2 letter applications per step.
State extract_merge_word(const Dfa& d, const MergeTable& mt, State p, State q, Word& out,
                         std::uint64_t& steps) {
  while (p != q) {
    auto [a, b] = make_pair_sorted(p, q);
    const Letter x = mt.letter[pair_index(d.n, a, b)];
    out.push_back(x);
    p = d.step(p, x);
    q = d.step(q, x);
    steps += 2;
  }
  return p;
}

// Greedy collapse of S = Q using the precomputed distances. Requires every
// pair mergeable.
Word greedy_word_from_table(const Dfa& d, const MergeTable& mt, std::uint64_t& steps) {
  const State n = d.n;
  std::vector<State> s(n);
  for (State q = 0; q < n; ++q) s[q] = q;
  Word word;
  std::vector<std::int32_t> stamp(n, -1);
  std::int32_t epoch = 0;
  while (s.size() > 1) {
    // Smallest distance, ties to the lexicographically smallest pair;
    // distance 1 cannot be beaten, so the scan stops early.
    std::int32_t best = -1;
    State bp = -1, bq = -1;
    for (std::size_t i = 0; i < s.size() && best != 1; ++i) {
      for (std::size_t j = i + 1; j < s.size(); ++j) {
        const std::int32_t dd = mt.dist[pair_index(n, s[i], s[j])];
        if (best < 0 || dd < best) {
          best = dd;
          bp = s[i];
          bq = s[j];
          if (best == 1) break;
        }
      }
    }
    Word w;
    extract_merge_word(d, mt, bp, bq, w, steps);
    for (Letter x : w) {
      ++epoch;
      std::size_t out = 0;
      for (State q : s) {
        const State t = d.step(q, x);
        ++steps;
        if (stamp[t] != epoch) {
          stamp[t] = epoch;
          s[out++] = t;
        }
      }
      s.resize(out);
    }
    std::sort(s.begin(), s.end());
    word.insert(word.end(), w.begin(), w.end());
  }
  return word;
}

}  // namespace

Verdict decide_exact(const Dfa& d) {
  Verdict v;
  v.method = "exact";
  const WeakComponents wc = weak_components(d);
  v.steps += wc.ops;
  if (!wc.connected) {
    v.synchronizing = false;
    v.certificate = DisconnectedCert{wc.label, wc.count};
    return v;
  }
  const MergeTable mt = merge_table(d);
  v.steps += mt.edges;
  if (!mt.all_mergeable) {
    for (State p = 0; p < d.n; ++p)
      for (State q = p + 1; q < d.n; ++q)
        if (mt.dist[pair_index(d.n, p, q)] < 0) {
          v.synchronizing = false;
          v.certificate = DeadlockPairCert{p, q};
          return v;
        }
  }
  v.synchronizing = true;
  v.certificate = ResetWordCert{greedy_word_from_table(d, mt, v.steps)};
  return v;
}

std::optional<Word> merge_word(const Dfa& d, State p, State q) {
  if (p == q) throw std::invalid_argument("states must be distinct");
  if (p < 0 || p >= d.n || q < 0 || q >= d.n) throw std::invalid_argument("state out of range");
  // Forward BFS in the pair automaton, small-footprint parent map.
  std::unordered_map<std::uint64_t, std::pair<std::uint64_t, std::int8_t>> came_from;
  std::vector<std::uint64_t> queue;
  const std::uint64_t start = pack(std::min(p, q), std::max(p, q));
  came_from.emplace(start, std::make_pair(start, std::int8_t(-1)));
  queue.push_back(start);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const std::uint64_t cur = queue[head];
    const State a = State(cur >> 32), b = State(std::uint32_t(cur));
    for (Letter x = 0; x < d.k; ++x) {
      const State u = d.step(a, x), w = d.step(b, x);
      if (u == w) {
        Word word;
        word.push_back(x);
        for (std::uint64_t at = cur; at != start; at = came_from[at].first)
          word.push_back(came_from[at].second);
        std::reverse(word.begin(), word.end());
        return word;
      }
      const std::uint64_t key = u < w ? pack(u, w) : pack(w, u);
      if (came_from.emplace(key, std::make_pair(cur, std::int8_t(x))).second)
        queue.push_back(key);
    }
  }
  return std::nullopt;
}

std::optional<Word> greedy_reset_word(const Dfa& d) {
  const MergeTable mt = merge_table(d);
  if (!mt.all_mergeable) return std::nullopt;
  std::uint64_t steps = 0;
  return greedy_word_from_table(d, mt, steps);
}

std::optional<Word> shortest_reset_word(const Dfa& d) {
  if (d.n > 16) throw CapacityError("subset search needs 2^n masks; refusing n > 16");
  const State n = d.n;
  const std::uint32_t full = (1u << n) - 1;
  if (n == 1) return Word{};

  // Per-letter bit images.
  std::vector<std::uint32_t> bit(std::size_t(d.k) * n);
  for (Letter x = 0; x < d.k; ++x)
    for (State q = 0; q < n; ++q) bit[std::size_t(x) * n + q] = 1u << d.step(q, x);

  std::vector<std::int32_t> parent(full + 1, -1);
  std::vector<std::int8_t> via(full + 1, -1);
  std::vector<std::uint32_t> queue;
  parent[full] = std::int32_t(full);
  queue.push_back(full);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const std::uint32_t mask = queue[head];
    for (Letter x = 0; x < d.k; ++x) {
      const std::uint32_t* bx = bit.data() + std::size_t(x) * n;
      std::uint32_t img = 0;
      for (std::uint32_t m = mask; m;) {
        const int q = std::countr_zero(m);
        m &= m - 1;
        img |= bx[q];
      }
      if (parent[img] >= 0) continue;
      parent[img] = std::int32_t(mask);
      via[img] = std::int8_t(x);
      if (std::popcount(img) == 1) {
        Word word;
        for (std::uint32_t at = img; at != full; at = std::uint32_t(parent[at]))
          word.push_back(via[at]);
        std::reverse(word.begin(), word.end());
        return word;
      }
      queue.push_back(img);
    }
  }
  return std::nullopt;
}

namespace {

// Bron-Kerbosch with pivoting over <= 12 vertices; collects every maximal
// clique as a bitmask.
void bron_kerbosch(std::uint32_t r, std::uint32_t p, std::uint32_t x,
                   const std::vector<std::uint32_t>& adj, std::vector<std::uint32_t>& out) {
  if (p == 0 && x == 0) {
    out.push_back(r);
    return;
  }
  const std::uint32_t px = p | x;
  int pivot = std::countr_zero(px);
  int best = -1;
  for (std::uint32_t m = px; m;) {
    const int v = std::countr_zero(m);
    m &= m - 1;
    const int deg = std::popcount(p & adj[v]);
    if (deg > best) {
      best = deg;
      pivot = v;
    }
  }
  for (std::uint32_t cand = p & ~adj[pivot]; cand;) {
    const int v = std::countr_zero(cand);
    cand &= cand - 1;
    const std::uint32_t vb = 1u << v;
    bron_kerbosch(r | vb, p & adj[v], x & adj[v], adj, out);
    p &= ~vb;
    x |= vb;
  }
}

}  // namespace

FCliqueSet f_cliques(const Dfa& d) {
  if (d.n > 12) throw CapacityError("maximum-clique search is limited to n <= 12");
  const MergeTable mt = merge_table(d);
  const State n = d.n;
  std::vector<std::uint32_t> adj(n, 0);
  for (State p = 0; p < n; ++p)
    for (State q = p + 1; q < n; ++q)
      if (mt.dist[pair_index(n, p, q)] < 0) {
        adj[p] |= 1u << q;
        adj[q] |= 1u << p;
      }
  std::vector<std::uint32_t> maximal;
  bron_kerbosch(0, (1u << n) - 1, 0, adj, maximal);

  FCliqueSet fc;
  for (std::uint32_t m : maximal) fc.size = std::max(fc.size, std::int32_t(std::popcount(m)));
  std::vector<std::uint32_t> best;
  for (std::uint32_t m : maximal)
    if (std::popcount(m) == std::int32_t(fc.size)) best.push_back(m);
  std::sort(best.begin(), best.end());
  for (std::uint32_t m : best) {
    std::vector<State> clique;
    for (std::uint32_t b = m; b;) {
      clique.push_back(std::countr_zero(b));
      b &= b - 1;
    }
    fc.cliques.push_back(std::move(clique));
  }
  return fc;
}

std::uint64_t enumeration_count(State n, Letter k) {
  if (n < 1 || k < 1) throw std::invalid_argument("need n >= 1 and k >= 1");
  std::uint64_t total = 1;
  const std::uint64_t cells = std::uint64_t(k) * std::uint64_t(n);
  for (std::uint64_t i = 0; i < cells; ++i) {
    if (total > kEnumerationLimit / std::uint64_t(n))
      throw CapacityError("enumeration of n^(k*n) tables exceeds the 1e8 limit");
    total *= std::uint64_t(n);
  }
  if (total > kEnumerationLimit)
    throw CapacityError("enumeration of n^(k*n) tables exceeds the 1e8 limit");
  return total;
}

std::vector<StatePair> propagate_pairs(const Dfa& d, StatePair seed, Letter x,
                                       std::int64_t length) {
  auto [p, q] = seed;
  if (p == q) throw std::invalid_argument("seed states must be distinct");
  std::vector<StatePair> out;
  out.push_back(make_pair_sorted(p, q));
  for (std::int64_t i = 0; i < length; ++i) {
    p = d.step(p, x);
    q = d.step(q, x);
    if (p == q) break;
    out.push_back(make_pair_sorted(p, q));
  }
  return out;
}

}  // namespace syncauto
