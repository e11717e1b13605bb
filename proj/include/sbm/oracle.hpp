#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "sbm/instance.hpp"
#include "sbm/relation.hpp"

namespace sbm {

// Exhaustive enumeration of satisfying assignments, in lexicographic order,
// stopping after `limit` hits. Ground truth for every solver comparison.
std::vector<std::vector<int>> brute_solve(const Instance& inst, std::size_t limit);

struct RandomProfile {
  std::vector<std::string> fixtures;
  int num_vars = 3;
  int num_constraints = 3;
  int max_arity = 2;
  double density = 0.5;
};

// Reproducible pseudo-random instance; constraint relations are closures of
// random tuple seeds, so they are always subalgebras.
Instance random_instance(std::uint64_t seed, const RandomProfile& profile,
                         const std::map<std::string, AlgebraRef>& extra = {});

// Reproducible subdirect closed relation over the given domains: one random
// tuple through every (coordinate, value) pair, closed under the operations.
Relation random_subdirect_relation(std::uint64_t seed, const std::vector<AlgebraRef>& domains);

}  // namespace sbm
