#pragma once

#include <iosfwd>
#include <vector>

#include "sbm/congruence.hpp"
#include "sbm/error.hpp"
#include "sbm/hybrid.hpp"
#include "sbm/instance.hpp"

namespace sbm {

// Family of per-coherent-set solutions agreeing modulo per-variable
// congruences. solutions[t] is an assignment on the sorted variable set of
// triple t's class, with triples indexed as in coherent_sets(inst).
struct Ensemble {
  std::vector<Congruence> gamma;
  std::vector<std::vector<int>> solutions;
};

// Checks the three ensemble conditions: every solution solves its class
// subinstance, overlapping solutions agree modulo gamma, and each
// constraint's assembled gamma-quotient tuple lies in the quotiented
// relation. Variables covered by no triple contribute their unique max
// element. Throws `kind` on the first violation.
void verify_ensemble(const Instance& inst, const CoherentIndex& index, const Ensemble& ens,
                     ErrorKind kind = ErrorKind::DescentFailed);

// Gamma = theta everywhere; each class takes the lexicographically least
// solution of its subinstance whose values all lie in max blocks.
Ensemble initial_ensemble(const Instance& inst, const CoherentIndex& index);
Ensemble initial_ensemble(const Instance& inst);

// One descent step at v from gamma_v to the covered beta_v. A class
// containing v keeps its solution when its value at v already lies in the
// target block of the reference solution, and is otherwise spliced through a
// collapsing polynomial of its solution set. The result is re-verified
// before it is returned.
Ensemble ensemble_descend(const Instance& inst, const CoherentIndex& index, const Ensemble& ens,
                          int v, const Congruence& beta_v);
Ensemble ensemble_descend(const Instance& inst, const Ensemble& ens, int v,
                          const Congruence& beta_v);

enum class DescentOrder { Forward, Reverse };

// Descends every variable's congruence to equality and assembles the common
// solution. Forward visits variables in input order taking the least covered
// congruence at each step; Reverse visits them backwards taking the
// greatest. The assembled assignment is verified against the instance.
std::vector<int> full_descent(const Instance& inst, DescentOrder order,
                              std::ostream* log = nullptr);

}  // namespace sbm
