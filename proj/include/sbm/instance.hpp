#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "sbm/algebra.hpp"
#include "sbm/relation.hpp"

namespace sbm {

// One constraint: ordered multiset of variable indices plus its tuple set.
struct Constraint {
  std::vector<int> scope;
  std::vector<std::vector<int>> tuples;
};

struct Instance {
  std::vector<std::string> var_names;
  std::vector<AlgebraRef> domains;
  std::vector<Constraint> constraints;

  int num_vars() const { return static_cast<int>(var_names.size()); }
};

// Structural checks: unique nonempty names, scopes and values in range,
// tuple sets sorted, duplicate-free, and closed under dot and m.
void validate_instance(const Instance& inst);

// The constraint as a standalone relation over its scope's domains.
Relation constraint_relation(const Instance& inst, const Constraint& c);

bool satisfies(const Instance& inst, const std::vector<int>& assignment);

// Adds the unary constraint pinning v to a.
Instance pin_constant(const Instance& inst, int v, int a);

// Subinstance on the given variables: constraints are projected onto the
// scope positions that survive; constraints with no surviving position drop.
Instance restrict_to(const Instance& inst, const std::vector<int>& vars);

// Deterministic serialization of domains and constraints, for memo keys.
std::string instance_key(const Instance& inst);

Instance instance_from_json(const nlohmann::json& j,
                            const std::map<std::string, AlgebraRef>& extra = {});
nlohmann::json instance_to_json(const Instance& inst);

}  // namespace sbm
