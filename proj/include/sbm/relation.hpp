#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "sbm/algebra.hpp"
#include "sbm/congruence.hpp"
#include "sbm/polynomial.hpp"

namespace sbm {

// Relation over a sequence of domains. Tuples are kept sorted and unique and
// must be closed under the componentwise operations.
struct Relation {
  std::vector<int> scope;  // variable ids, multiset allowed
  std::vector<AlgebraRef> domains;
  std::vector<std::vector<int>> tuples;

  int arity() const { return static_cast<int>(scope.size()); }
  bool contains(const std::vector<int>& t) const;
};

Relation make_relation(std::vector<int> scope, std::vector<AlgebraRef> domains,
                       std::vector<std::vector<int>> tuples, bool require_closed = true);

bool is_closed_tuple_set(const std::vector<AlgebraRef>& domains,
                         const std::vector<std::vector<int>>& tuples);

// Least closed superset of the given tuples.
std::vector<std::vector<int>> close_tuple_set(const std::vector<AlgebraRef>& domains,
                                              std::vector<std::vector<int>> tuples);

bool is_subdirect(const Relation& rel);
void require_subdirect(const Relation& rel);

// positions may repeat and reorder coordinates.
Relation project(const Relation& rel, const std::vector<int>& positions);

// True when the relation is the union of full blocks I-part x J-part over the
// linked components.
bool rectangularity_check(const Relation& rel, const std::vector<int>& positions);

struct LinkCongruence {
  Relation projection;        // project(rel, positions)
  std::vector<int> block_of;  // per projection tuple, canonical ids
  int num_blocks = 0;
};

// Two I-projections are linked when some common J-part completes both.
// The one-step link relation must already be transitive.
LinkCongruence link_congruence(const Relation& rel, const std::vector<int>& positions);

Relation quotient_relation(const Relation& rel, const std::vector<Congruence>& congs,
                           const std::string& name_suffix = "/q");

// Pairs of unary maps realized by the polynomials of a binary relation.
std::vector<std::pair<MapTable, MapTable>> pair_polynomial_monoid(const Relation& rel);

// Cached pointwise closure arena for a binary relation.
const PolyArena& pair_arena(const Relation& rel);

// Binary diagonal over one algebra, used for separation queries at a single
// coordinate.
Relation diagonal_relation(const AlgebraRef& alg, int var);

nlohmann::json relation_to_json(const Relation& rel);
Relation relation_from_json(const nlohmann::json& j,
                            const std::map<std::string, AlgebraRef>& extra = {});

}  // namespace sbm
