#pragma once

#include <vector>

#include "sbm/instance.hpp"
#include "sbm/relation.hpp"

namespace sbm {

// Result of k-minimality: pruned constraints plus tightened, relabeled
// domains. value_of[v] maps each new element of domain v to its original.
struct TightenedInstance {
  Instance instance;
  std::vector<std::vector<int>> value_of;
  bool unsat = false;
};

// Solutions of the subproblem on vars (each constraint projected onto the
// scope positions hitting vars), as assignments in vars order.
std::vector<std::vector<int>> partial_solutions(const Instance& inst,
                                                const std::vector<int>& vars);

// Prunes every tuple unsupported by some subproblem on at most k variables,
// to fixpoint, then tightens each domain to its supported subalgebra.
TightenedInstance establish_k_minimality(const Instance& inst, int k);

// S_vw: the solution set of the subproblem on {v, w}; the diagonal when
// v == w. The instance must already be tightened (3-minimal).
Relation pairwise_solutions(const Instance& inst, int v, int w);

}  // namespace sbm
