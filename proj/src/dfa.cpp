#include "syncauto/dfa.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "json.hpp"

namespace syncauto {

namespace {

void check_dims(State n, Letter k) {
  if (n < 1) throw std::invalid_argument("state count must be >= 1");
  if (k < 1) throw std::invalid_argument("alphabet size must be >= 1");
}

}  // namespace

Dfa::Dfa(State n_, Letter k_) : n(n_), k(k_) {
  check_dims(n_, k_);
  delta.assign(std::size_t(k) * n, 0);
}

Dfa::Dfa(State n_, Letter k_, std::vector<State> delta_) : n(n_), k(k_), delta(std::move(delta_)) {
  check_dims(n_, k_);
  if (delta.size() != std::size_t(k) * n)
    throw std::invalid_argument("transition table must have k*n entries");
  for (State v : delta)
    if (v < 0 || v >= n) throw std::invalid_argument("transition target out of range");
}

Dfa random_dfa(State n, Letter k, Rng& rng) {
  check_dims(n, k);
  Dfa d;
  d.n = n;
  d.k = k;
  d.delta.resize(std::size_t(k) * n);
  for (State& v : d.delta) v = State(rng.next_below(std::uint32_t(n)));
  return d;
}

Dfa parse_dfa(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(e.what());
  }
  if (!j.is_object()) throw ParseError("expected a JSON object with fields n, k, delta");
  auto require_int = [&](const char* field) -> std::int64_t {
    if (!j.contains(field) || !j[field].is_number_integer())
      throw ParseError(std::string("field \"") + field + "\": expected an integer");
    return j[field].get<std::int64_t>();
  };
  const std::int64_t n = require_int("n");
  const std::int64_t k = require_int("k");
  if (n < 1) throw ParseError("field \"n\": must be >= 1");
  if (k < 1) throw ParseError("field \"k\": must be >= 1");
  if (!j.contains("delta") || !j["delta"].is_array())
    throw ParseError("field \"delta\": expected an array of k rows");
  const auto& rows = j["delta"];
  if (std::int64_t(rows.size()) != k)
    throw ParseError("delta: expected " + std::to_string(k) + " rows, got " +
                     std::to_string(rows.size()));
  Dfa d;
  d.n = State(n);
  d.k = Letter(k);
  d.delta.reserve(std::size_t(k) * n);
  for (std::int64_t x = 0; x < k; ++x) {
    const auto& row = rows[x];
    if (!row.is_array() || std::int64_t(row.size()) != n)
      throw ParseError("delta[" + std::to_string(x) + "]: expected " + std::to_string(n) +
                       " entries, got " + std::to_string(row.size()));
    for (std::int64_t q = 0; q < n; ++q) {
      if (!row[q].is_number_integer())
        throw ParseError("delta[" + std::to_string(x) + "][" + std::to_string(q) +
                         "]: expected an integer");
      const std::int64_t v = row[q].get<std::int64_t>();
      if (v < 0 || v >= n)
        throw ParseError("delta[" + std::to_string(x) + "][" + std::to_string(q) + "]: entry " +
                         std::to_string(v) + " out of range [0, " + std::to_string(n) + ")");
      d.delta.push_back(State(v));
    }
  }
  return d;
}

std::string serialize_dfa(const Dfa& d) {
  std::string out = "{\"n\":" + std::to_string(d.n) + ",\"k\":" + std::to_string(d.k) +
                    ",\"delta\":[";
  for (Letter x = 0; x < d.k; ++x) {
    if (x) out += ',';
    out += '[';
    for (State q = 0; q < d.n; ++q) {
      if (q) out += ',';
      out += std::to_string(d.step(q, x));
    }
    out += ']';
  }
  out += "]}";
  return out;
}

State apply_word(const Dfa& d, State q, std::span<const Letter> w) {
  if (q < 0 || q >= d.n) throw std::invalid_argument("state out of range");
  for (Letter x : w) {
    if (x < 0 || x >= d.k) throw std::invalid_argument("letter out of range");
    q = d.step(q, x);
  }
  return q;
}

std::vector<State> image(const Dfa& d, std::span<const State> s, Letter x) {
  if (x < 0 || x >= d.k) throw std::invalid_argument("letter out of range");
  std::vector<std::uint8_t> seen(d.n, 0);
  std::vector<State> out;
  out.reserve(s.size());
  for (State q : s) {
    if (q < 0 || q >= d.n) throw std::invalid_argument("state out of range");
    const State r = d.step(q, x);
    if (!seen[r]) {
      seen[r] = 1;
      out.push_back(r);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

struct UnionFind {
  std::vector<std::int32_t> parent;
  std::vector<std::int32_t> size;
  std::uint64_t ops = 0;

  explicit UnionFind(std::int32_t n) : parent(n), size(n, 1) {
    std::iota(parent.begin(), parent.end(), 0);
  }

  std::int32_t find(std::int32_t x) {
    while (parent[x] != x) {
      ++ops;
      parent[x] = parent[parent[x]];  // path halving
      x = parent[x];
    }
    ++ops;
    return x;
  }

  void unite(std::int32_t a, std::int32_t b) {
    a = find(a);
    b = find(b);
    ++ops;
    if (a == b) return;
    if (size[a] < size[b]) std::swap(a, b);
    parent[b] = a;
    size[a] += size[b];
  }
};

}  // namespace

WeakComponents weak_components(const Dfa& d) {
  UnionFind uf(d.n);
  for (Letter x = 0; x < d.k; ++x)
    for (State q = 0; q < d.n; ++q) uf.unite(q, d.step(q, x));
  WeakComponents wc;
  wc.label.assign(d.n, -1);
  std::vector<std::int32_t> root_label(d.n, -1);
  std::int32_t next = 0;
  for (State q = 0; q < d.n; ++q) {
    const std::int32_t r = uf.find(q);
    if (root_label[r] < 0) root_label[r] = next++;
    wc.label[q] = root_label[r];
  }
  wc.count = next;
  wc.connected = next == 1;
  wc.ops = uf.ops;
  return wc;
}

ClosedComponents minimal_closed_components(const Dfa& d) {
  // Iterative Tarjan over the implicit out-degree-k digraph.
  const State n = d.n;
  std::vector<std::int32_t> index(n, -1), low(n, 0), comp(n, -1);
  std::vector<std::uint8_t> on_stack(n, 0);
  std::vector<State> stack;
  std::vector<std::pair<State, Letter>> call;  // (vertex, next letter to expand)
  std::int32_t next_index = 0, comp_count = 0;

  for (State start = 0; start < n; ++start) {
    if (index[start] >= 0) continue;
    call.emplace_back(start, 0);
    index[start] = low[start] = next_index++;
    stack.push_back(start);
    on_stack[start] = 1;
    while (!call.empty()) {
      auto& [v, x] = call.back();
      if (x < d.k) {
        const State w = d.step(v, x++);
        if (index[w] < 0) {
          index[w] = low[w] = next_index++;
          stack.push_back(w);
          on_stack[w] = 1;
          call.emplace_back(w, 0);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
      } else {
        if (low[v] == index[v]) {
          for (;;) {
            const State u = stack.back();
            stack.pop_back();
            on_stack[u] = 0;
            comp[u] = comp_count;
            if (u == v) break;
          }
          ++comp_count;
        }
        const State done = v;
        call.pop_back();
        if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
      }
    }
  }

  // A component is minimal closed iff no arc leaves it.
  std::vector<std::uint8_t> has_exit(comp_count, 0);
  for (State q = 0; q < n; ++q)
    for (Letter x = 0; x < d.k; ++x)
      if (comp[d.step(q, x)] != comp[q]) has_exit[comp[q]] = 1;

  std::vector<std::vector<State>> members(comp_count);
  for (State q = 0; q < n; ++q)
    if (!has_exit[comp[q]]) members[comp[q]].push_back(q);

  ClosedComponents cc;
  std::vector<std::pair<State, std::int32_t>> order;  // (smallest state, comp id)
  for (std::int32_t c = 0; c < comp_count; ++c)
    if (!members[c].empty()) order.emplace_back(members[c].front(), c);
  std::sort(order.begin(), order.end());
  for (auto& [first_state, c] : order) {
    cc.sizes.push_back(std::int32_t(members[c].size()));
    cc.components.push_back(std::move(members[c]));
  }
  return cc;
}

double disconnected_singleton_probability(State n) {
  if (n < 3) throw std::invalid_argument("formula requires n >= 3");
  const double nn = double(n);
  return (1.0 / nn) * std::pow(1.0 - 2.0 / nn, nn - 1.0);
}

bool exactly_one_disconnected_state(const Dfa& d) {
  State fixed = -1;
  int fixed_count = 0;
  for (State q = 0; q < d.n && fixed_count < 2; ++q) {
    bool all_self = true;
    for (Letter x = 0; x < d.k; ++x)
      if (d.step(q, x) != q) {
        all_self = false;
        break;
      }
    if (all_self) {
      fixed = q;
      ++fixed_count;
    }
  }
  if (fixed_count != 1) return false;
  for (State q = 0; q < d.n; ++q) {
    if (q == fixed) continue;
    for (Letter x = 0; x < d.k; ++x)
      if (d.step(q, x) == fixed) return false;
  }
  return true;
}

}  // namespace syncauto
