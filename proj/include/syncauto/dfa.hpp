#pragma once

// Complete deterministic finite automata over a small alphabet, stored as a
// flat letter-major transition table, plus uniform random generation, JSON
// serialization, and whole-digraph analyses (weak connectivity, terminal
// strongly connected components).

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace syncauto {

using State = std::int32_t;
using Letter = std::int32_t;
using Word = std::vector<Letter>;

// Input text that does not describe a valid automaton.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Request exceeds a hard size limit of the chosen algorithm.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// SplitMix64. Same seed, same stream. Bounded draws use rejection, so they
// are exactly uniform (no modulo bias).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform draw from [0, bound), bound > 0.
  std::uint32_t next_below(std::uint32_t bound) {
    // Reject the low residue block so every value in [0, bound) keeps
    // exactly floor(2^64 / bound) preimages.
    const std::uint64_t threshold = (0 - std::uint64_t(bound)) % bound;
    for (;;) {
      const std::uint64_t r = next_u64();
      if (r >= threshold) return std::uint32_t(r % bound);
    }
  }

  // Generator for trial `index` of stream `stream`. Independent of the order
  // in which trials are executed; used by the parallel experiment harness.
  static Rng derive(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
    Rng r(mix(seed + 0x9e3779b97f4a7c15ull * (stream + 1)));
    r.state_ = mix(r.state_ + 0x9e3779b97f4a7c15ull * (index + 1));
    return r;
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
};

// Complete DFA with n states and k letters, both 0-based. The transition
// table is letter-major: row x is the functional map of letter x, so
// per-letter analyses scan contiguous memory.
struct Dfa {
  State n = 0;
  Letter k = 0;
  std::vector<State> delta;  // k rows of n entries; delta[x*n + q]

  Dfa() = default;
  Dfa(State n_, Letter k_);                            // zero-filled table
  Dfa(State n_, Letter k_, std::vector<State> delta_); // validates entries

  State step(State q, Letter x) const { return delta[std::size_t(x) * n + q]; }

  std::span<const State> row(Letter x) const {
    return {delta.data() + std::size_t(x) * n, std::size_t(n)};
  }

  bool operator==(const Dfa&) const = default;
};

// Every table entry is an independent uniform draw from [0, n).
Dfa random_dfa(State n, Letter k, Rng& rng);

// JSON interchange format: {"n":4,"k":2,"delta":[[1,2,3,0],[0,1,2,0]]}
// with delta[letter][state], everything 0-based. parse accepts any key
// order; serialize emits n, k, delta with no whitespace.
Dfa parse_dfa(const std::string& text);
std::string serialize_dfa(const Dfa& d);

// q.w, letters applied left to right.
State apply_word(const Dfa& d, State q, std::span<const Letter> w);

// { q.x : q in s }, deduplicated and sorted ascending.
std::vector<State> image(const Dfa& d, std::span<const State> s, Letter x);

struct WeakComponents {
  bool connected = false;
  std::vector<std::int32_t> label;  // per state, component ids 0..count-1
  std::int32_t count = 0;
  std::uint64_t ops = 0;            // union/find operations performed
};

// Connectivity of the undirected graph with edges {q, q.x}; union-find over
// all k*n arcs.
WeakComponents weak_components(const Dfa& d);

inline bool is_weakly_connected(const Dfa& d) { return weak_components(d).connected; }

struct ClosedComponents {
  std::vector<std::vector<State>> components;  // each sorted ascending
  std::vector<std::int32_t> sizes;
};

// Terminal strongly connected components of the digraph with arcs q -> q.x.
// These are exactly the minimal state sets closed under all letters; every
// state can reach at least one of them.
ClosedComponents minimal_closed_components(const Dfa& d);

// (1/n) * (1 - 2/n)^(n-1): the probability that a uniform 2-letter automaton
// has a unique all-letter fixed point that is isolated, with no other state
// fixed by every letter. Requires n >= 3.
double disconnected_singleton_probability(State n);

// The counted family behind disconnected_singleton_probability: exactly one
// state is fixed by every letter, nothing else maps into it, and no other
// state is fixed by every letter.
bool exactly_one_disconnected_state(const Dfa& d);

}  // namespace syncauto
