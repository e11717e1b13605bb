#include "sbm/relation.hpp"

#include <algorithm>
#include <memory>
#include <set>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "sbm/error.hpp"
#include "sbm/sbm_structure.hpp"

namespace sbm {

bool Relation::contains(const std::vector<int>& t) const {
  return std::binary_search(tuples.begin(), tuples.end(), t);
}

bool is_closed_tuple_set(const std::vector<AlgebraRef>& domains,
                         const std::vector<std::vector<int>>& tuples) {
  const std::size_t arity = domains.size();
  std::set<std::vector<int>> have(tuples.begin(), tuples.end());
  std::vector<int> buf(arity);
  for (const auto& a : tuples)
    for (const auto& b : tuples) {
      for (std::size_t c = 0; c < arity; ++c) buf[c] = domains[c]->dot(a[c], b[c]);
      if (!have.count(buf)) return false;
      for (const auto& d : tuples) {
        for (std::size_t c = 0; c < arity; ++c) buf[c] = domains[c]->m(a[c], b[c], d[c]);
        if (!have.count(buf)) return false;
      }
    }
  return true;
}

std::vector<std::vector<int>> close_tuple_set(const std::vector<AlgebraRef>& domains,
                                              std::vector<std::vector<int>> tuples) {
  const std::size_t arity = domains.size();
  std::set<std::vector<int>> have;
  std::vector<std::vector<int>> work;
  for (auto& t : tuples)
    if (have.insert(t).second) work.push_back(t);
  std::vector<int> buf(arity);
  auto add = [&](const std::vector<int>& t) {
    if (have.insert(t).second) work.push_back(t);
  };
  // work grows inside the loops, so iterate by index and copy out each
  // operand before any insertion can reallocate the vector.
  for (std::size_t qi = 0; qi < work.size(); ++qi) {
    const auto q = work[qi];
    for (std::size_t j = 0; j <= qi; ++j) {
      const auto s = work[j];
      for (std::size_t c = 0; c < arity; ++c) buf[c] = domains[c]->dot(q[c], s[c]);
      add(buf);
      for (std::size_t c = 0; c < arity; ++c) buf[c] = domains[c]->dot(s[c], q[c]);
      add(buf);
      for (std::size_t k = 0; k <= qi; ++k) {
        const auto t = work[k];
        for (std::size_t c = 0; c < arity; ++c) buf[c] = domains[c]->m(q[c], s[c], t[c]);
        add(buf);
        for (std::size_t c = 0; c < arity; ++c) buf[c] = domains[c]->m(s[c], q[c], t[c]);
        add(buf);
        for (std::size_t c = 0; c < arity; ++c) buf[c] = domains[c]->m(s[c], t[c], q[c]);
        add(buf);
      }
    }
  }
  return {have.begin(), have.end()};
}

Relation make_relation(std::vector<int> scope, std::vector<AlgebraRef> domains,
                       std::vector<std::vector<int>> tuples, bool require_closed) {
  if (scope.size() != domains.size())
    fail(ErrorKind::BadIndex, "relation scope and domains disagree");
  for (const auto& t : tuples) {
    if (t.size() != scope.size())
      fail(ErrorKind::ElementOutOfDomain, "relation tuple has wrong arity");
    for (std::size_t c = 0; c < t.size(); ++c)
      if (t[c] < 0 || t[c] >= domains[c]->size())
        fail(ErrorKind::ElementOutOfDomain, "relation tuple entry out of range");
  }
  std::sort(tuples.begin(), tuples.end());
  tuples.erase(std::unique(tuples.begin(), tuples.end()), tuples.end());
  if (require_closed && !is_closed_tuple_set(domains, tuples))
    fail(ErrorKind::PreconditionViolated,
         "relation tuples are not closed under the componentwise operations");
  Relation rel;
  rel.scope = std::move(scope);
  rel.domains = std::move(domains);
  rel.tuples = std::move(tuples);
  return rel;
}

bool is_subdirect(const Relation& rel) {
  for (int c = 0; c < rel.arity(); ++c) {
    std::vector<char> seen(rel.domains[c]->size(), 0);
    for (const auto& t : rel.tuples) seen[t[c]] = 1;
    if (std::count(seen.begin(), seen.end(), 1) != rel.domains[c]->size()) return false;
  }
  return true;
}

void require_subdirect(const Relation& rel) {
  if (!is_subdirect(rel))
    fail(ErrorKind::NotSubdirect, "relation is not subdirect on its domains");
}

Relation project(const Relation& rel, const std::vector<int>& positions) {
  std::vector<int> scope;
  std::vector<AlgebraRef> domains;
  for (int p : positions) {
    if (p < 0 || p >= rel.arity())
      fail(ErrorKind::BadIndex, "projection position out of range");
    scope.push_back(rel.scope[p]);
    domains.push_back(rel.domains[p]);
  }
  std::vector<std::vector<int>> tuples;
  tuples.reserve(rel.tuples.size());
  for (const auto& t : rel.tuples) {
    std::vector<int> u(positions.size());
    for (std::size_t j = 0; j < positions.size(); ++j) u[j] = t[positions[j]];
    tuples.push_back(std::move(u));
  }
  // Projection of a closed set is closed; skip the quadratic recheck.
  auto out = make_relation(std::move(scope), std::move(domains), std::move(tuples), false);
  return out;
}

bool rectangularity_check(const Relation& rel, const std::vector<int>& positions) {
  std::vector<char> in_i(rel.arity(), 0);
  for (int p : positions) {
    if (p < 0 || p >= rel.arity())
      fail(ErrorKind::BadIndex, "rectangularity position out of range");
    in_i[p] = 1;
  }
  auto part = [&](const std::vector<int>& t, bool side_i) {
    std::vector<int> out;
    for (int c = 0; c < rel.arity(); ++c)
      if (in_i[c] == (side_i ? 1 : 0)) out.push_back(t[c]);
    return out;
  };
  // (a,c),(a,d),(b,c) in rel forces (b,d): every linked component of the
  // bipartite graph between I-parts and J-parts must be complete bipartite.
  std::map<std::vector<int>, int> i_ids, j_ids;
  std::vector<std::pair<int, int>> edges;
  for (const auto& t : rel.tuples) {
    const int a = i_ids.emplace(part(t, true), static_cast<int>(i_ids.size())).first->second;
    const int b = j_ids.emplace(part(t, false), static_cast<int>(j_ids.size())).first->second;
    edges.emplace_back(a, b);
  }
  std::vector<int> comp(i_ids.size() + j_ids.size());
  for (std::size_t v = 0; v < comp.size(); ++v) comp[v] = static_cast<int>(v);
  auto root = [&](int v) {
    while (comp[v] != v) v = comp[v] = comp[comp[v]];
    return v;
  };
  const int j_base = static_cast<int>(i_ids.size());
  for (auto [a, b] : edges) comp[root(a)] = root(j_base + b);
  std::map<int, long> i_count, j_count, e_count;
  for (int a = 0; a < j_base; ++a) ++i_count[root(a)];
  for (std::size_t b = 0; b < j_ids.size(); ++b) ++j_count[root(j_base + static_cast<int>(b))];
  for (auto [a, b] : edges) ++e_count[root(a)];
  for (auto [r, e] : e_count)
    if (e != i_count[r] * j_count[r]) return false;
  return true;
}

LinkCongruence link_congruence(const Relation& rel, const std::vector<int>& positions) {
  std::vector<char> in_i(rel.arity(), 0);
  for (int p : positions) {
    if (p < 0 || p >= rel.arity())
      fail(ErrorKind::BadIndex, "link congruence position out of range");
    in_i[p] = 1;
  }
  std::vector<int> j_positions;
  for (int c = 0; c < rel.arity(); ++c)
    if (!in_i[c]) j_positions.push_back(c);

  const Relation proj = project(rel, positions);
  std::unordered_map<std::string, int> index;
  auto key_of = [](const std::vector<int>& t) {
    std::string k;
    for (int v : t) {
      k.push_back(static_cast<char>(v));
      k.push_back('/');
    }
    return k;
  };
  for (std::size_t i = 0; i < proj.tuples.size(); ++i) index.emplace(key_of(proj.tuples[i]), i);

  // One-step link relation via shared J-parts.
  const std::size_t n = proj.tuples.size();
  std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
  std::unordered_map<std::string, std::vector<int>> by_j;
  for (const auto& t : rel.tuples) {
    std::vector<int> ipart(positions.size());
    for (std::size_t j = 0; j < positions.size(); ++j) ipart[j] = t[positions[j]];
    std::vector<int> jpart;
    for (int c : j_positions) jpart.push_back(t[c]);
    by_j[key_of(jpart)].push_back(index.at(key_of(ipart)));
  }
  for (auto& [k, ids] : by_j)
    for (int a : ids)
      for (int b : ids) adj[a][b] = 1;

  // The one-step relation must itself be an equivalence.
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      if (!adj[a][b]) continue;
      for (std::size_t c = 0; c < n; ++c)
        if (adj[b][c] && !adj[a][c])
          fail(ErrorKind::NotTransitive, "one-step link relation is not transitive");
    }

  std::vector<int> raw(n, -1);
  int next_id = 0;
  for (std::size_t a = 0; a < n; ++a) {
    if (raw[a] != -1) continue;
    raw[a] = next_id;
    for (std::size_t b = a + 1; b < n; ++b)
      if (adj[a][b]) raw[b] = next_id;
    ++next_id;
  }
  LinkCongruence out;
  out.projection = proj;
  const Congruence canon = canonical_partition(raw);
  out.block_of = canon.block_of;
  out.num_blocks = canon.num_blocks;
  return out;
}

Relation quotient_relation(const Relation& rel, const std::vector<Congruence>& congs,
                           const std::string& name_suffix) {
  require_internal(congs.size() == static_cast<std::size_t>(rel.arity()),
                   "quotient congruence list arity mismatch");
  std::vector<AlgebraRef> domains;
  for (int c = 0; c < rel.arity(); ++c)
    domains.push_back(
        quotient_algebra(*rel.domains[c], congs[c], rel.domains[c]->name() + name_suffix));
  std::vector<std::vector<int>> tuples;
  for (const auto& t : rel.tuples) {
    std::vector<int> q(rel.arity());
    for (int c = 0; c < rel.arity(); ++c) q[c] = congs[c].block_of[t[c]];
    tuples.push_back(std::move(q));
  }
  // Homomorphic image of a closed set is closed.
  return make_relation(rel.scope, std::move(domains), std::move(tuples), false);
}

const PolyArena& pair_arena(const Relation& rel) {
  require_internal(rel.arity() == 2, "pair arena needs a binary relation");
  require_subdirect(rel);
  // The closure depends only on the domain tables and the tuple set, so it is
  // computed once per content; witnesses carry variable labels, so each scope
  // gets its own rescoped copy of the shared closure.
  static thread_local std::unordered_map<std::string, std::unique_ptr<PolyArena>> masters;
  static thread_local std::unordered_map<std::string, std::unique_ptr<PolyArena>> views;
  std::string content =
      rel.domains[0]->table_signature() + "#" + rel.domains[1]->table_signature();
  for (const auto& t : rel.tuples) {
    content.push_back(static_cast<char>(t[0]));
    content.push_back(static_cast<char>(t[1]));
  }
  std::string scoped =
      std::to_string(rel.scope[0]) + "," + std::to_string(rel.scope[1]) + "#" + content;
  auto vit = views.find(scoped);
  if (vit != views.end()) return *vit->second;
  auto mit = masters.find(content);
  if (mit == masters.end()) {
    auto arena = std::make_unique<PolyArena>(rel.domains, rel.scope, rel.tuples);
    mit = masters.emplace(std::move(content), std::move(arena)).first;
  }
  const PolyArena& master = *mit->second;
  if (master.scope() == rel.scope) return master;
  vit = views.emplace(std::move(scoped), std::make_unique<PolyArena>(master.rescoped(rel.scope)))
            .first;
  return *vit->second;
}

std::vector<std::pair<MapTable, MapTable>> pair_polynomial_monoid(const Relation& rel) {
  const PolyArena& arena = pair_arena(rel);
  std::vector<std::pair<MapTable, MapTable>> out;
  out.reserve(arena.size());
  for (std::size_t i = 0; i < arena.size(); ++i) {
    auto maps = arena.maps(i);
    out.emplace_back(std::move(maps[0]), std::move(maps[1]));
  }
  std::sort(out.begin(), out.end());
  return out;
}

Relation diagonal_relation(const AlgebraRef& alg, int var) {
  std::vector<std::vector<int>> tuples;
  for (int v = 0; v < alg->size(); ++v) tuples.push_back({v, v});
  return make_relation({var, var}, {alg, alg}, std::move(tuples), false);
}

nlohmann::json relation_to_json(const Relation& rel) {
  nlohmann::json names = nlohmann::json::array();
  for (const auto& d : rel.domains) names.push_back(d->name());
  return nlohmann::json{
      {"scope", rel.scope}, {"domains", std::move(names)}, {"tuples", rel.tuples}};
}

Relation relation_from_json(const nlohmann::json& j,
                            const std::map<std::string, AlgebraRef>& extra) {
  if (!j.is_object() || !j.contains("scope") || !j.contains("domains") || !j.contains("tuples"))
    fail(ErrorKind::BadIndex, "relation JSON must have scope, domains, tuples");
  const auto scope = j.at("scope").get<std::vector<int>>();
  std::vector<AlgebraRef> domains;
  for (const auto& name : j.at("domains")) domains.push_back(lookup_algebra(name, extra));
  auto tuples = j.at("tuples").get<std::vector<std::vector<int>>>();
  return make_relation(scope, std::move(domains), std::move(tuples));
}

}  // namespace sbm
