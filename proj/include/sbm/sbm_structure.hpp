#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sbm/algebra.hpp"
#include "sbm/congruence.hpp"

namespace sbm {

// Witness that an algebra is a semilattice block Mal'tsev algebra: the least
// congruence sigma whose quotient is a dot-semilattice while dot is first
// projection and m is Mal'tsev inside each block, plus derived structure.
struct SbmCertificate {
  Congruence sigma;
  Congruence theta;             // max block plus singletons
  std::vector<int> max_block;   // sorted elements of the top sigma-block
  std::optional<int> minimal_element;
  bool is_maltsev = false;      // sigma is the full relation
};

// Searches the congruence lattice finest-first and certifies the first sigma
// that passes all block and quotient checks. Expects normalized operations.
SbmCertificate verify_sbm(const FiniteAlgebra& alg);

// Replaces dot by its absorption iterate and m by its dot-corrected variant,
// then checks the resulting identities against sigma.
AlgebraRef normalize_operations(const FiniteAlgebra& alg, const Congruence& sigma);

// Least congruence whose quotient under dot satisfies the three semilattice
// identities; the entry point for normalization before any sigma is certified.
std::optional<Congruence> least_semilattice_congruence(const FiniteAlgebra& alg);

// Convenience wrapper: find a semilattice congruence, normalize with it.
AlgebraRef normalize_algebra(const FiniteAlgebra& alg);

Congruence theta_congruence(const FiniteAlgebra& alg, const Congruence& sigma);

// Elements a with dot(a,b) and dot(a,c) in different alpha classes for some
// b, c sharing a beta block.
std::vector<int> split_elements(const FiniteAlgebra& alg, const Congruence& alpha,
                                const Congruence& beta);
bool is_split_element(const FiniteAlgebra& alg, const Congruence& alpha, const Congruence& beta,
                      int a);

// Inflation of a join-semilattice by cyclic groups: elements are (block, g)
// pairs numbered block by block. join_table is the semilattice operation on
// block indices; group_orders gives |G_b| per block.
AlgebraRef generate_fixture(const std::vector<std::vector<int>>& join_table,
                            const std::vector<int>& group_orders, const std::string& name);

// Named builtin algebras plus chain_<o0>_<o1>_... and vee_<o0>_<o1>_<o2>
// patterns; extra entries extend and override the builtins.
AlgebraRef lookup_algebra(const std::string& name,
                          const std::map<std::string, AlgebraRef>& extra = {});

// Cached certificate for a normalized SBM algebra, keyed by its tables.
const SbmCertificate& certificate_for(const AlgebraRef& alg);

// True when every element of the tuple lies in the max block of its domain.
bool tuple_in_max(const std::vector<AlgebraRef>& domains, const std::vector<int>& tuple);

}  // namespace sbm
