#include "sbm/instance.hpp"

#include <algorithm>
#include <map>
#include <nlohmann/json.hpp>
#include <set>
#include <sstream>

#include "sbm/error.hpp"
#include "sbm/sbm_structure.hpp"

namespace sbm {

void validate_instance(const Instance& inst) {
  if (inst.var_names.size() != inst.domains.size()) {
    fail(ErrorKind::BadIndex, "variable and domain counts differ");
  }
  std::set<std::string> seen;
  for (const std::string& name : inst.var_names) {
    if (name.empty()) fail(ErrorKind::BadIndex, "empty variable name");
    if (!seen.insert(name).second) fail(ErrorKind::BadIndex, "duplicate variable name: " + name);
  }
  const int n = inst.num_vars();
  for (const Constraint& c : inst.constraints) {
    for (int v : c.scope) {
      if (v < 0 || v >= n) fail(ErrorKind::BadIndex, "constraint scope variable out of range");
    }
    for (const auto& t : c.tuples) {
      if (t.size() != c.scope.size()) fail(ErrorKind::NonTotalTable, "constraint tuple arity mismatch");
      for (std::size_t p = 0; p < t.size(); ++p) {
        const int limit = inst.domains[static_cast<std::size_t>(c.scope[p])]->size();
        if (t[p] < 0 || t[p] >= limit) {
          fail(ErrorKind::ElementOutOfDomain, "constraint tuple value out of domain");
        }
      }
    }
    if (!std::is_sorted(c.tuples.begin(), c.tuples.end())) {
      fail(ErrorKind::PreconditionViolated, "constraint tuples must be sorted");
    }
    if (std::adjacent_find(c.tuples.begin(), c.tuples.end()) != c.tuples.end()) {
      fail(ErrorKind::PreconditionViolated, "constraint tuples must be duplicate-free");
    }
    std::vector<AlgebraRef> doms;
    doms.reserve(c.scope.size());
    for (int v : c.scope) doms.push_back(inst.domains[static_cast<std::size_t>(v)]);
    if (!is_closed_tuple_set(doms, c.tuples)) {
      fail(ErrorKind::PreconditionViolated, "constraint relation is not closed under the operations");
    }
  }
}

Relation constraint_relation(const Instance& inst, const Constraint& c) {
  std::vector<AlgebraRef> doms;
  doms.reserve(c.scope.size());
  for (int v : c.scope) doms.push_back(inst.domains[static_cast<std::size_t>(v)]);
  Relation rel;
  rel.scope = c.scope;
  rel.domains = std::move(doms);
  rel.tuples = c.tuples;
  return rel;
}

bool satisfies(const Instance& inst, const std::vector<int>& assignment) {
  if (assignment.size() != inst.var_names.size()) return false;
  for (std::size_t v = 0; v < assignment.size(); ++v) {
    if (assignment[v] < 0 || assignment[v] >= inst.domains[v]->size()) return false;
  }
  for (const Constraint& c : inst.constraints) {
    std::vector<int> t(c.scope.size());
    for (std::size_t p = 0; p < c.scope.size(); ++p) {
      t[p] = assignment[static_cast<std::size_t>(c.scope[p])];
    }
    if (!std::binary_search(c.tuples.begin(), c.tuples.end(), t)) return false;
  }
  return true;
}

Instance pin_constant(const Instance& inst, int v, int a) {
  if (v < 0 || v >= inst.num_vars()) fail(ErrorKind::BadIndex, "pinned variable out of range");
  if (a < 0 || a >= inst.domains[static_cast<std::size_t>(v)]->size()) {
    fail(ErrorKind::ElementOutOfDomain, "pinned value out of domain");
  }
  Instance out = inst;
  out.constraints.push_back(Constraint{{v}, {{a}}});
  return out;
}

Instance restrict_to(const Instance& inst, const std::vector<int>& vars) {
  std::vector<int> old_to_new(inst.var_names.size(), -1);
  Instance out;
  for (int v : vars) {
    if (v < 0 || v >= inst.num_vars()) fail(ErrorKind::BadIndex, "restriction variable out of range");
    require_internal(old_to_new[static_cast<std::size_t>(v)] == -1,
                     "restriction variable listed twice");
    old_to_new[static_cast<std::size_t>(v)] = static_cast<int>(out.var_names.size());
    out.var_names.push_back(inst.var_names[static_cast<std::size_t>(v)]);
    out.domains.push_back(inst.domains[static_cast<std::size_t>(v)]);
  }
  for (const Constraint& c : inst.constraints) {
    std::vector<std::size_t> keep;
    for (std::size_t p = 0; p < c.scope.size(); ++p) {
      if (old_to_new[static_cast<std::size_t>(c.scope[p])] != -1) keep.push_back(p);
    }
    if (keep.empty()) continue;
    Constraint pc;
    pc.scope.reserve(keep.size());
    for (std::size_t p : keep) pc.scope.push_back(old_to_new[static_cast<std::size_t>(c.scope[p])]);
    std::set<std::vector<int>> uniq;
    for (const auto& t : c.tuples) {
      std::vector<int> u;
      u.reserve(keep.size());
      for (std::size_t p : keep) u.push_back(t[p]);
      uniq.insert(std::move(u));
    }
    pc.tuples.assign(uniq.begin(), uniq.end());
    out.constraints.push_back(std::move(pc));
  }
  return out;
}

std::string instance_key(const Instance& inst) {
  std::ostringstream os;
  os << inst.num_vars() << ';';
  for (const AlgebraRef& d : inst.domains) os << d->table_signature() << '|';
  std::vector<std::string> parts;
  for (const Constraint& c : inst.constraints) {
    std::ostringstream cs;
    for (int v : c.scope) cs << v << ',';
    cs << ':';
    for (const auto& t : c.tuples) {
      for (int x : t) cs << x << ',';
      cs << ';';
    }
    parts.push_back(cs.str());
  }
  std::sort(parts.begin(), parts.end());
  parts.erase(std::unique(parts.begin(), parts.end()), parts.end());
  for (const std::string& p : parts) os << p << '#';
  return os.str();
}

Instance instance_from_json(const nlohmann::json& j, const std::map<std::string, AlgebraRef>& extra) {
  if (!j.is_object() || !j.contains("vars") || !j.contains("domains") || !j.contains("constraints")) {
    fail(ErrorKind::BadIndex, "instance JSON needs vars, domains, constraints");
  }
  Instance inst;
  std::map<std::string, int> index_of;
  for (const auto& v : j.at("vars")) {
    std::string name = v.get<std::string>();
    index_of[name] = static_cast<int>(inst.var_names.size());
    inst.var_names.push_back(std::move(name));
  }
  inst.domains.resize(inst.var_names.size());
  for (std::size_t v = 0; v < inst.var_names.size(); ++v) {
    const std::string& name = inst.var_names[v];
    if (!j.at("domains").contains(name)) fail(ErrorKind::BadIndex, "missing domain for variable " + name);
    inst.domains[v] = lookup_algebra(j.at("domains").at(name).get<std::string>(), extra);
  }
  for (const auto& cj : j.at("constraints")) {
    Constraint c;
    for (const auto& sv : cj.at("scope")) {
      auto it = index_of.find(sv.get<std::string>());
      if (it == index_of.end()) fail(ErrorKind::BadIndex, "constraint scope names unknown variable");
      c.scope.push_back(it->second);
    }
    for (const auto& tj : cj.at("tuples")) {
      c.tuples.push_back(tj.get<std::vector<int>>());
    }
    std::sort(c.tuples.begin(), c.tuples.end());
    c.tuples.erase(std::unique(c.tuples.begin(), c.tuples.end()), c.tuples.end());
    inst.constraints.push_back(std::move(c));
  }
  validate_instance(inst);
  return inst;
}

nlohmann::json instance_to_json(const Instance& inst) {
  nlohmann::json j;
  j["vars"] = inst.var_names;
  nlohmann::json doms = nlohmann::json::object();
  for (std::size_t v = 0; v < inst.var_names.size(); ++v) {
    doms[inst.var_names[v]] = inst.domains[v]->name();
  }
  j["domains"] = std::move(doms);
  nlohmann::json cons = nlohmann::json::array();
  for (const Constraint& c : inst.constraints) {
    nlohmann::json cj;
    nlohmann::json scope = nlohmann::json::array();
    for (int v : c.scope) scope.push_back(inst.var_names[static_cast<std::size_t>(v)]);
    cj["scope"] = std::move(scope);
    cj["tuples"] = c.tuples;
    cons.push_back(std::move(cj));
  }
  j["constraints"] = std::move(cons);
  return j;
}

}  // namespace sbm
