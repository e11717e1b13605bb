#include "sbm/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "sbm/error.hpp"
#include "sbm/sbm_structure.hpp"

namespace sbm {

namespace {

// Modulo draw keeps streams identical across standard library implementations.
int draw(std::mt19937_64& rng, int bound) {
  return static_cast<int>(rng() % static_cast<std::uint64_t>(bound));
}

}  // namespace

std::vector<std::vector<int>> brute_solve(const Instance& inst, std::size_t limit) {
  double product = 1.0;
  for (const AlgebraRef& d : inst.domains) product *= d->size();
  if (product > 1e7) fail(ErrorKind::TooLarge, "assignment space too large to enumerate");

  std::vector<std::vector<int>> out;
  if (limit == 0) return out;
  const std::size_t n = inst.var_names.size();
  std::vector<int> assign(n, 0);
  for (;;) {
    if (satisfies(inst, assign)) {
      out.push_back(assign);
      if (out.size() >= limit) return out;
    }
    std::size_t p = n;
    for (;;) {
      if (p == 0) return out;
      --p;
      if (++assign[p] < inst.domains[p]->size()) break;
      assign[p] = 0;
    }
  }
}

Instance random_instance(std::uint64_t seed, const RandomProfile& profile,
                         const std::map<std::string, AlgebraRef>& extra) {
  if (profile.fixtures.empty()) fail(ErrorKind::BadIndex, "profile needs at least one fixture");
  if (profile.num_vars < 1 || profile.num_constraints < 0 || profile.max_arity < 1) {
    fail(ErrorKind::BadIndex, "profile counts out of range");
  }
  std::mt19937_64 rng(seed);
  Instance inst;
  for (int v = 0; v < profile.num_vars; ++v) {
    inst.var_names.push_back("v" + std::to_string(v));
    const std::string& pick =
        profile.fixtures[static_cast<std::size_t>(draw(rng, static_cast<int>(profile.fixtures.size())))];
    inst.domains.push_back(lookup_algebra(pick, extra));
  }
  for (int c = 0; c < profile.num_constraints; ++c) {
    Constraint con;
    const int arity = 1 + draw(rng, profile.max_arity);
    double product = 1.0;
    std::vector<AlgebraRef> doms;
    for (int p = 0; p < arity; ++p) {
      con.scope.push_back(draw(rng, profile.num_vars));
      doms.push_back(inst.domains[static_cast<std::size_t>(con.scope.back())]);
      product *= doms.back()->size();
    }
    std::vector<std::vector<int>> seeds;
    if (profile.density >= 1.0) {
      // Full product: seed with every tuple directly.
      std::vector<int> t(static_cast<std::size_t>(arity), 0);
      for (;;) {
        seeds.push_back(t);
        int p = arity;
        for (;;) {
          if (p == 0) goto full_done;
          --p;
          if (++t[static_cast<std::size_t>(p)] < doms[static_cast<std::size_t>(p)]->size()) break;
          t[static_cast<std::size_t>(p)] = 0;
        }
      }
    full_done:;
    } else {
      const int want = std::max(1, static_cast<int>(std::llround(profile.density * product)));
      for (int s = 0; s < want; ++s) {
        std::vector<int> t(static_cast<std::size_t>(arity));
        for (int p = 0; p < arity; ++p) {
          t[static_cast<std::size_t>(p)] = draw(rng, doms[static_cast<std::size_t>(p)]->size());
        }
        seeds.push_back(std::move(t));
      }
    }
    con.tuples = close_tuple_set(doms, std::move(seeds));
    inst.constraints.push_back(std::move(con));
  }
  validate_instance(inst);
  return inst;
}

Relation random_subdirect_relation(std::uint64_t seed, const std::vector<AlgebraRef>& domains) {
  if (domains.empty()) fail(ErrorKind::BadIndex, "subdirect generator needs at least one domain");
  std::mt19937_64 rng(seed);
  const std::size_t arity = domains.size();
  std::vector<std::vector<int>> seeds;
  for (std::size_t c = 0; c < arity; ++c) {
    for (int a = 0; a < domains[c]->size(); ++a) {
      std::vector<int> t(arity);
      for (std::size_t p = 0; p < arity; ++p) t[p] = draw(rng, domains[p]->size());
      t[c] = a;
      seeds.push_back(std::move(t));
    }
  }
  std::vector<int> scope;
  for (std::size_t c = 0; c < arity; ++c) scope.push_back(static_cast<int>(c));
  Relation rel = make_relation(scope, domains, close_tuple_set(domains, std::move(seeds)));
  require_subdirect(rel);
  return rel;
}

}  // namespace sbm
