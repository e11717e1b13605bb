#pragma once

#include <optional>
#include <vector>

#include "sbm/instance.hpp"

namespace sbm {

// Generating set of a Mal'tsev solution set. Signature entries carry value
// pairs a < b seen at coordinate v among solutions sharing a prefix; the
// witness list realizes every entry and never exceeds 1 + 2 * sum |A_v|^2.
struct CompactRep {
  struct SigEntry {
    int v;
    int a;
    int b;
  };
  std::vector<SigEntry> signature;
  std::vector<std::vector<int>> witnesses;
};

bool all_maltsev(const Instance& inst);

// Lexicographically least satisfying assignment, or none.
std::optional<std::vector<int>> solve_maltsev(const Instance& inst);

std::size_t compact_witness_bound(const Instance& inst);
CompactRep compact_representation(const Instance& inst);

// Closure of the tuples under componentwise m alone.
std::vector<std::vector<int>> m_closure(const std::vector<AlgebraRef>& domains,
                                        std::vector<std::vector<int>> tuples);

struct MinimalizeResult {
  Instance instance;
  bool unsat = false;
};

// Removes every constraint tuple that does not extend to a solution, by
// pinning the tuple's scope and re-solving, iterated to fixpoint.
MinimalizeResult minimalize_maltsev(const Instance& inst);

}  // namespace sbm
