#pragma once

#include <utility>
#include <vector>

#include "sbm/algebra.hpp"

namespace sbm {

// Partition of an algebra's universe, canonicalized so block ids appear in
// order of each block's least element.
struct Congruence {
  std::vector<int> block_of;
  int num_blocks = 0;

  int size() const { return static_cast<int>(block_of.size()); }
  bool related(int a, int b) const { return block_of[a] == block_of[b]; }
  bool operator==(const Congruence& other) const { return block_of == other.block_of; }
  bool operator!=(const Congruence& other) const { return !(*this == other); }

  std::vector<std::vector<int>> blocks() const;
  std::vector<int> block_elements(int block) const;
  // Total pair count, counting ordered pairs including the diagonal.
  long pair_count() const;
};

struct PrimeInterval {
  Congruence alpha;
  Congruence beta;  // alpha covered by beta
};

Congruence canonical_partition(const std::vector<int>& raw_block_ids);
Congruence zero_congruence(int n);
Congruence one_congruence(int n);
Congruence partition_from_blocks(int n, const std::vector<std::vector<int>>& blocks);

// a <= b in the refinement order (every a-block lies inside a b-block).
bool finer_or_equal(const Congruence& a, const Congruence& b);

// Deterministic total order: ascending pair count, then lexicographic block ids.
bool congruence_less(const Congruence& a, const Congruence& b);

bool is_congruence(const FiniteAlgebra& alg, const Congruence& c);

// Validates that the blocks form a partition compatible with both operations.
Congruence make_congruence(const FiniteAlgebra& alg, const std::vector<std::vector<int>>& blocks);

// Least congruence containing the given pairs (Mal'cev one-step translations
// plus transitive closure via union-find).
Congruence generate_congruence(const FiniteAlgebra& alg,
                               const std::vector<std::pair<int, int>>& pairs);

Congruence join_congruence(const FiniteAlgebra& alg, const Congruence& a, const Congruence& b);
Congruence meet_congruence(const Congruence& a, const Congruence& b);

// All congruences, sorted by congruence_less (finest first).
std::vector<Congruence> congruence_lattice(const FiniteAlgebra& alg);

// All covering pairs alpha < beta with beta <= theta, in canonical order.
std::vector<PrimeInterval> prime_intervals_below(const FiniteAlgebra& alg, const Congruence& theta);

AlgebraRef quotient_algebra(const FiniteAlgebra& alg, const Congruence& cong,
                            const std::string& name);

}  // namespace sbm
