#pragma once

// Budgeted decision pipeline for random automata: a linear connectivity
// check, a candidate stable pair read off the unique highest tree of one
// letter, breadth-first pair merging under explicit budgets, and an exact
// fallback. Every exit carries a machine-checkable certificate; budget
// expiry is never reported as a proof.

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "syncauto/funcgraph.hpp"
#include "syncauto/oracle.hpp"

namespace syncauto {

// The pair {p, q} built from a letter whose highest tree is unique and
// strictly higher than all others: p_high is the smallest state of level h
// in that tree, p = p_high advanced h-1 steps (so p sits one step above the
// cycle), and q is the cyclic predecessor of the tree's root.
struct CandidatePair {
  Letter letter = 0;
  std::int32_t h = 0;
  State p_high = 0;
  State p = 0;
  State q = 0;
  StatePair pair{0, 0};
};

std::optional<CandidatePair> candidate_stable_pair(const Dfa& d, Letter x);
std::optional<CandidatePair> candidate_stable_pair(const Dfa& d, const LetterGraph& lg);

enum class MergeOutcome { merged, deadlock, exhausted };

struct MergeProbe {
  MergeOutcome outcome = MergeOutcome::exhausted;
  Word word;            // set when merged; a shortest merging word
  std::uint64_t edges = 0;  // pair edges generated (charged against the budget)
};

// Forward BFS from {p, q} in the pair automaton, charging one unit per
// generated pair edge. `deadlock` is returned only when the reachable pair
// set was explored completely without touching the diagonal.
MergeProbe budgeted_pair_merge(const Dfa& d, State p, State q, std::uint64_t budget);

// Sub-budgets of the pipeline, all scaled by `scale`: candidate probe gets
// probe_per_n * n edges, each collapse merge gets merge_per_n * n, and the
// whole collapse phase is capped at total_coeff * n^1.5.
struct BudgetPolicy {
  double probe_per_n = 8.0;
  double merge_per_n = 8.0;
  double total_coeff = 8.0;
  double scale = 1.0;
};

// Pipeline: (1) weak connectivity; (2) candidate stable pair from the letter
// with the larger highest-tree margin; (3) budgeted probe of the candidate;
// (4) image collapse — apply the chosen letter n times to land on its cyclic
// states, then merge the survivors pairwise under budget; (5) exact fallback
// on any budget exhaustion. Verdicts agree with decide_exact on every input.
Verdict fast_decide(const Dfa& d, const BudgetPolicy& policy = {});

// Walks the seed pair through the letters, alternating a, b, a, ... and
// collecting distinct pairs until `want` are found, the chain merges, or a
// step cap is hit. Outputs are stable whenever the seed is stable.
std::vector<StatePair> harvest_stable_pairs(const Dfa& d, StatePair seed, std::int64_t want);

}  // namespace syncauto
