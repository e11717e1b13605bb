#include "sbm/maltsev.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "sbm/error.hpp"

namespace sbm {

namespace {

bool is_maltsev_algebra(const FiniteAlgebra& alg) {
  const int n = alg.size();
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      if (alg.m(x, y, y) != x || alg.m(y, y, x) != x) return false;
    }
  }
  return true;
}

void require_maltsev(const Instance& inst) {
  for (const AlgebraRef& d : inst.domains) {
    if (!is_maltsev_algebra(*d)) {
      fail(ErrorKind::NotMaltsevDomain, "domain " + d->name() + " is not Mal'tsev under m");
    }
  }
}

// Constraints checkable once variables [0, v] are assigned.
std::vector<std::vector<int>> constraints_by_last_var(const Instance& inst) {
  std::vector<std::vector<int>> by_var(inst.var_names.size());
  for (std::size_t c = 0; c < inst.constraints.size(); ++c) {
    const Constraint& con = inst.constraints[c];
    if (con.scope.empty()) continue;
    int last = *std::max_element(con.scope.begin(), con.scope.end());
    by_var[static_cast<std::size_t>(last)].push_back(static_cast<int>(c));
  }
  return by_var;
}

bool constraint_holds(const Constraint& c, const std::vector<int>& assignment) {
  std::vector<int> t(c.scope.size());
  for (std::size_t p = 0; p < c.scope.size(); ++p) {
    t[p] = assignment[static_cast<std::size_t>(c.scope[p])];
  }
  return std::binary_search(c.tuples.begin(), c.tuples.end(), t);
}

// Depth-first search in variable and element order; emit() returns false to
// keep enumerating, true to stop.
template <typename Emit>
void dfs_solutions(const Instance& inst, Emit&& emit) {
  const int n = inst.num_vars();
  for (const Constraint& c : inst.constraints) {
    if (c.tuples.empty()) return;
  }
  std::vector<std::vector<int>> by_var = constraints_by_last_var(inst);
  std::vector<int> assignment(static_cast<std::size_t>(n), 0);
  if (n == 0) return;

  std::vector<int> depth_stack;
  int v = 0;
  assignment[0] = -1;
  while (v >= 0) {
    ++assignment[static_cast<std::size_t>(v)];
    if (assignment[static_cast<std::size_t>(v)] >= inst.domains[static_cast<std::size_t>(v)]->size()) {
      --v;
      continue;
    }
    bool ok = true;
    for (int c : by_var[static_cast<std::size_t>(v)]) {
      if (!constraint_holds(inst.constraints[static_cast<std::size_t>(c)], assignment)) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    if (v == n - 1) {
      if (emit(assignment)) return;
    } else {
      ++v;
      assignment[static_cast<std::size_t>(v)] = -1;
    }
  }
}

std::vector<std::vector<int>> all_solutions(const Instance& inst) {
  double product = 1.0;
  for (const AlgebraRef& d : inst.domains) product *= d->size();
  if (product > 1e7) fail(ErrorKind::TooLarge, "assignment space too large to enumerate");
  std::vector<std::vector<int>> out;
  dfs_solutions(inst, [&](const std::vector<int>& a) {
    out.push_back(a);
    return false;
  });
  return out;
}

}  // namespace

bool all_maltsev(const Instance& inst) {
  for (const AlgebraRef& d : inst.domains) {
    if (!is_maltsev_algebra(*d)) return false;
  }
  return true;
}

std::optional<std::vector<int>> solve_maltsev(const Instance& inst) {
  require_maltsev(inst);
  if (inst.num_vars() == 0) return std::vector<int>{};
  std::optional<std::vector<int>> found;
  dfs_solutions(inst, [&](const std::vector<int>& a) {
    found = a;
    return true;
  });
  return found;
}

std::size_t compact_witness_bound(const Instance& inst) {
  std::size_t bound = 1;
  for (const AlgebraRef& d : inst.domains) {
    std::size_t n = static_cast<std::size_t>(d->size());
    bound += 2 * n * n;
  }
  return bound;
}

CompactRep compact_representation(const Instance& inst) {
  require_maltsev(inst);
  std::vector<std::vector<int>> sols = all_solutions(inst);
  CompactRep rep;
  if (sols.empty()) return rep;

  const int n = inst.num_vars();
  std::set<std::vector<int>> witness_set;
  witness_set.insert(sols.front());

  for (int v = 0; v < n; ++v) {
    // Solutions are in lex order, so buckets of equal prefixes are runs and
    // the first tuple per (bucket, value) is the lex-least witness.
    std::map<std::vector<int>, std::map<int, const std::vector<int>*>> buckets;
    for (const auto& s : sols) {
      std::vector<int> prefix(s.begin(), s.begin() + v);
      auto& by_value = buckets[prefix];
      by_value.emplace(s[static_cast<std::size_t>(v)], &s);
    }
    std::set<std::pair<int, int>> pairs;
    std::map<std::pair<int, int>, std::pair<const std::vector<int>*, const std::vector<int>*>> best;
    for (const auto& [prefix, by_value] : buckets) {
      for (auto ita = by_value.begin(); ita != by_value.end(); ++ita) {
        for (auto itb = std::next(ita); itb != by_value.end(); ++itb) {
          std::pair<int, int> key{ita->first, itb->first};
          if (pairs.insert(key).second) {
            best[key] = {ita->second, itb->second};
          }
        }
      }
    }
    for (const auto& [key, wit] : best) {
      rep.signature.push_back(CompactRep::SigEntry{v, key.first, key.second});
      witness_set.insert(*wit.first);
      witness_set.insert(*wit.second);
    }
  }
  std::sort(rep.signature.begin(), rep.signature.end(), [](const auto& x, const auto& y) {
    if (x.v != y.v) return x.v < y.v;
    if (x.a != y.a) return x.a < y.a;
    return x.b < y.b;
  });
  rep.witnesses.assign(witness_set.begin(), witness_set.end());
  require_internal(rep.witnesses.size() <= compact_witness_bound(inst),
                   "compact representation exceeds its witness bound");
  return rep;
}

std::vector<std::vector<int>> m_closure(const std::vector<AlgebraRef>& domains,
                                        std::vector<std::vector<int>> tuples) {
  std::set<std::vector<int>> seen(tuples.begin(), tuples.end());
  std::vector<std::vector<int>> work(seen.begin(), seen.end());
  const std::size_t arity = domains.size();
  auto apply = [&](const std::vector<int>& p, const std::vector<int>& q,
                   const std::vector<int>& r) {
    std::vector<int> u(arity);
    for (std::size_t c = 0; c < arity; ++c) u[c] = domains[c]->m(p[c], q[c], r[c]);
    if (seen.insert(u).second) work.push_back(std::move(u));
  };
  // Every triple is enumerated when its highest-index member is the head.
  for (std::size_t head = 0; head < work.size(); ++head) {
    std::vector<int> t = work[head];
    const std::size_t upto = work.size();
    for (std::size_t x = 0; x < upto; ++x) {
      std::vector<int> tx = work[x];
      for (std::size_t y = 0; y < upto; ++y) {
        std::vector<int> ty = work[y];
        apply(t, tx, ty);
        apply(tx, t, ty);
        apply(tx, ty, t);
      }
    }
  }
  return {seen.begin(), seen.end()};
}

MinimalizeResult minimalize_maltsev(const Instance& inst) {
  require_maltsev(inst);
  MinimalizeResult res{inst, false};
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t c = 0; c < res.instance.constraints.size(); ++c) {
      Constraint& con = res.instance.constraints[c];
      std::vector<std::vector<int>> kept;
      kept.reserve(con.tuples.size());
      for (const auto& t : con.tuples) {
        Instance pinned = res.instance;
        for (std::size_t p = 0; p < con.scope.size(); ++p) {
          pinned.constraints.push_back(Constraint{{con.scope[p]}, {{t[p]}}});
        }
        if (solve_maltsev(pinned).has_value()) kept.push_back(t);
      }
      if (kept.size() != con.tuples.size()) {
        con.tuples = std::move(kept);
        changed = true;
      }
    }
  }
  for (const Constraint& c : res.instance.constraints) {
    if (c.tuples.empty()) res.unsat = true;
  }
  return res;
}

}  // namespace sbm
