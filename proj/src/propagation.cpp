#include "sbm/propagation.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "sbm/error.hpp"

namespace sbm {

namespace {

// Positions of each constraint hitting the variable set, with tuple-set
// signatures for fast support queries.
struct ScopeHit {
  std::vector<std::size_t> positions;
  std::set<std::vector<int>> projected;
};

ScopeHit hit_of(const Constraint& c, const std::vector<int>& vars) {
  ScopeHit hit;
  for (std::size_t p = 0; p < c.scope.size(); ++p) {
    if (std::find(vars.begin(), vars.end(), c.scope[p]) != vars.end()) hit.positions.push_back(p);
  }
  for (const auto& t : c.tuples) {
    std::vector<int> proj;
    proj.reserve(hit.positions.size());
    for (std::size_t p : hit.positions) proj.push_back(t[p]);
    hit.projected.insert(std::move(proj));
  }
  return hit;
}

// All size-k subsets of {0..n-1} in lexicographic order.
void subsets_upto(int n, int k, std::vector<std::vector<int>>& out) {
  for (int size = 1; size <= std::min(k, n); ++size) {
    std::vector<int> idx(static_cast<std::size_t>(size));
    for (int i = 0; i < size; ++i) idx[static_cast<std::size_t>(i)] = i;
    for (;;) {
      out.push_back(idx);
      int i = size - 1;
      while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - size + i) --i;
      if (i < 0) break;
      ++idx[static_cast<std::size_t>(i)];
      for (int j = i + 1; j < size; ++j) {
        idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
      }
    }
  }
}

}  // namespace

std::vector<std::vector<int>> partial_solutions(const Instance& inst,
                                                const std::vector<int>& vars) {
  std::vector<ScopeHit> hits;
  hits.reserve(inst.constraints.size());
  for (const Constraint& c : inst.constraints) hits.push_back(hit_of(c, vars));

  std::vector<std::vector<int>> out;
  std::vector<int> assign(vars.size(), 0);
  for (;;) {
    bool ok = true;
    for (std::size_t ci = 0; ci < hits.size() && ok; ++ci) {
      const ScopeHit& hit = hits[ci];
      if (hit.positions.empty()) continue;
      std::vector<int> proj;
      proj.reserve(hit.positions.size());
      for (std::size_t p : hit.positions) {
        int var = inst.constraints[ci].scope[p];
        std::size_t at = static_cast<std::size_t>(
            std::find(vars.begin(), vars.end(), var) - vars.begin());
        proj.push_back(assign[at]);
      }
      if (!hit.projected.count(proj)) ok = false;
    }
    if (ok) out.push_back(assign);

    std::size_t p = vars.size();
    while (p > 0) {
      --p;
      if (++assign[p] < inst.domains[static_cast<std::size_t>(vars[p])]->size()) break;
      assign[p] = 0;
      if (p == 0) return out;
    }
    if (vars.empty()) return out;
  }
}

TightenedInstance establish_k_minimality(const Instance& inst, int k) {
  if (k < 1) fail(ErrorKind::BadIndex, "minimality level must be at least 1");
  TightenedInstance res;
  res.instance = inst;
  Instance& cur = res.instance;
  const int n = cur.num_vars();

  std::vector<std::vector<int>> subsets;
  subsets_upto(n, k, subsets);

  bool changed = true;
  while (changed) {
    changed = false;
    for (const std::vector<int>& vars : subsets) {
      std::vector<std::vector<int>> sols = partial_solutions(cur, vars);
      // Index solutions by their values in vars order for direct matching.
      std::set<std::vector<int>> sol_set(sols.begin(), sols.end());
      for (Constraint& c : cur.constraints) {
        std::vector<std::size_t> positions;
        for (std::size_t p = 0; p < c.scope.size(); ++p) {
          if (std::find(vars.begin(), vars.end(), c.scope[p]) != vars.end()) positions.push_back(p);
        }
        if (positions.empty()) continue;
        std::vector<std::vector<int>> kept;
        kept.reserve(c.tuples.size());
        for (const auto& t : c.tuples) {
          // A tuple survives when some partial solution matches it at every
          // position touching vars.
          bool supported = false;
          for (const auto& s : sol_set) {
            bool match = true;
            for (std::size_t p : positions) {
              std::size_t at = static_cast<std::size_t>(
                  std::find(vars.begin(), vars.end(), c.scope[p]) - vars.begin());
              if (s[at] != t[p]) {
                match = false;
                break;
              }
            }
            if (match) {
              supported = true;
              break;
            }
          }
          if (supported) kept.push_back(t);
        }
        if (kept.size() != c.tuples.size()) {
          c.tuples = std::move(kept);
          changed = true;
          if (c.tuples.empty()) {
            res.unsat = true;
            res.value_of.assign(static_cast<std::size_t>(n), {});
            for (int v = 0; v < n; ++v) {
              const int sz = cur.domains[static_cast<std::size_t>(v)]->size();
              for (int x = 0; x < sz; ++x) res.value_of[static_cast<std::size_t>(v)].push_back(x);
            }
            return res;
          }
        }
      }
    }
  }

  // Tighten each domain to its supported values, relabeling constraints.
  res.value_of.assign(static_cast<std::size_t>(n), {});
  std::vector<std::vector<int>> new_of(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) {
    std::vector<int> support;
    for (const auto& s : partial_solutions(cur, {v})) support.push_back(s[0]);
    std::sort(support.begin(), support.end());
    support.erase(std::unique(support.begin(), support.end()), support.end());
    require_internal(!support.empty(), "nonempty fixpoint left an empty domain support");
    res.value_of[static_cast<std::size_t>(v)] = support;
    const AlgebraRef& dom = cur.domains[static_cast<std::size_t>(v)];
    new_of[static_cast<std::size_t>(v)].assign(static_cast<std::size_t>(dom->size()), -1);
    for (std::size_t i = 0; i < support.size(); ++i) {
      new_of[static_cast<std::size_t>(v)][static_cast<std::size_t>(support[i])] = static_cast<int>(i);
    }
    if (static_cast<int>(support.size()) != dom->size()) {
      cur.domains[static_cast<std::size_t>(v)] =
          sub_algebra(*dom, support, dom->name() + "/s");
    }
  }
  for (Constraint& c : cur.constraints) {
    for (auto& t : c.tuples) {
      for (std::size_t p = 0; p < t.size(); ++p) {
        int mapped = new_of[static_cast<std::size_t>(c.scope[p])][static_cast<std::size_t>(t[p])];
        require_internal(mapped >= 0, "pruned constraints still use an unsupported value");
        t[p] = mapped;
      }
    }
    std::sort(c.tuples.begin(), c.tuples.end());
    c.tuples.erase(std::unique(c.tuples.begin(), c.tuples.end()), c.tuples.end());
  }
  return res;
}

Relation pairwise_solutions(const Instance& inst, int v, int w) {
  const int n = inst.num_vars();
  if (v < 0 || v >= n || w < 0 || w >= n) fail(ErrorKind::BadIndex, "pair variables out of range");
  if (v == w) return diagonal_relation(inst.domains[static_cast<std::size_t>(v)], v);
  std::vector<int> vars = {v, w};
  const bool swapped = v > w;
  std::vector<int> sorted_vars = vars;
  std::sort(sorted_vars.begin(), sorted_vars.end());
  std::vector<std::vector<int>> sols = partial_solutions(inst, sorted_vars);
  std::vector<std::vector<int>> tuples;
  tuples.reserve(sols.size());
  for (const auto& s : sols) {
    if (swapped) {
      tuples.push_back({s[1], s[0]});
    } else {
      tuples.push_back(s);
    }
  }
  std::sort(tuples.begin(), tuples.end());
  return make_relation({v, w},
                       {inst.domains[static_cast<std::size_t>(v)],
                        inst.domains[static_cast<std::size_t>(w)]},
                       std::move(tuples));
}

}  // namespace sbm
