#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <vector>

#include "sbm/algebra.hpp"
#include "sbm/error.hpp"
#include "sbm/instance.hpp"
#include "sbm/maltsev.hpp"
#include "sbm/oracle.hpp"
#include "sbm/sbm_structure.hpp"
#include "support/checks.hpp"

using sbm::AlgebraRef;
using sbm::Constraint;
using sbm::ErrorKind;
using sbm::Instance;
using testsupport::error_kind_of;

namespace {

// x + y = c over a cyclic group given by its dot-free Mal'tsev fixture.
Constraint sum_equals(const AlgebraRef& g, int x, int y, int c) {
  Constraint out;
  out.scope = {x, y};
  const int n = g->size();
  for (int a = 0; a < n; ++a) out.tuples.push_back({a, ((c - a) % n + n) % n});
  std::sort(out.tuples.begin(), out.tuples.end());
  return out;
}

Instance group_instance(const std::string& fixture, int vars,
                        const std::vector<Constraint>& cs) {
  Instance inst;
  AlgebraRef g = sbm::lookup_algebra(fixture);
  for (int v = 0; v < vars; ++v) {
    inst.var_names.push_back("v" + std::to_string(v));
    inst.domains.push_back(g);
  }
  inst.constraints = cs;
  sbm::validate_instance(inst);
  return inst;
}

}  // namespace

TEST_CASE("affine systems match the exhaustive oracle") {
  Instance sat = group_instance(
      "z3", 3, {sum_equals(sbm::lookup_algebra("z3"), 0, 1, 1),
                sum_equals(sbm::lookup_algebra("z3"), 1, 2, 2)});
  REQUIRE(sbm::all_maltsev(sat));
  auto got = sbm::solve_maltsev(sat);
  auto oracle = sbm::brute_solve(sat, 1);
  REQUIRE(got.has_value());
  REQUIRE_FALSE(oracle.empty());
  CHECK(*got == oracle[0]);

  // Contradictory pins over the two element group.
  Instance unsat = group_instance(
      "z2", 2, {sum_equals(sbm::lookup_algebra("z2"), 0, 1, 0),
                sum_equals(sbm::lookup_algebra("z2"), 0, 1, 1)});
  CHECK_FALSE(sbm::solve_maltsev(unsat).has_value());
  CHECK(sbm::brute_solve(unsat, 1).empty());
}

TEST_CASE("random affine instances agree with the oracle") {
  sbm::RandomProfile profile;
  profile.fixtures = {"z2", "z3"};
  profile.num_vars = 4;
  profile.num_constraints = 4;
  profile.max_arity = 3;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    Instance inst = sbm::random_instance(seed, profile);
    REQUIRE(sbm::all_maltsev(inst));
    auto got = sbm::solve_maltsev(inst);
    auto oracle = sbm::brute_solve(inst, 1);
    REQUIRE(got.has_value() == !oracle.empty());
    if (got.has_value()) {
      CHECK(sbm::satisfies(inst, *got));
      CHECK(*got == oracle[0]);
    }
  }
}

TEST_CASE("non Mal'tsev domains are rejected") {
  Instance inst;
  inst.var_names = {"x"};
  inst.domains = {sbm::lookup_algebra("fixb")};
  CHECK_FALSE(sbm::all_maltsev(inst));
  CHECK(error_kind_of([&] { sbm::solve_maltsev(inst); }) == ErrorKind::NotMaltsevDomain);
}

TEST_CASE("compact representation realizes its signature within the bound") {
  Instance inst = group_instance(
      "z3", 3, {sum_equals(sbm::lookup_algebra("z3"), 0, 1, 1),
                sum_equals(sbm::lookup_algebra("z3"), 1, 2, 2)});
  sbm::CompactRep rep = sbm::compact_representation(inst);
  auto solutions = sbm::brute_solve(inst, 1000);
  CHECK(rep.witnesses.size() <= sbm::compact_witness_bound(inst));
  CHECK(sbm::compact_witness_bound(inst) == 1 + 2 * 3 * 9);
  for (const auto& w : rep.witnesses)
    CHECK(std::binary_search(solutions.begin(), solutions.end(), w));
  // Every signature entry is realized by a pair of witnesses sharing a prefix.
  for (const auto& e : rep.signature) {
    bool realized = false;
    for (const auto& w : rep.witnesses)
      if (w[e.v] == e.b) realized = true;
    CHECK(realized);
  }
}

TEST_CASE("m closure grows the affine span") {
  AlgebraRef z2 = sbm::lookup_algebra("z2");
  std::vector<AlgebraRef> doms = {z2, z2, z2};
  auto closed = sbm::m_closure(doms, {{0, 0, 0}, {1, 1, 0}});
  CHECK(closed == std::vector<std::vector<int>>{{0, 0, 0}, {1, 1, 0}});
  auto grown = sbm::m_closure(doms, {{0, 0, 0}, {1, 1, 0}, {1, 0, 1}});
  CHECK(grown.size() == 4);
  CHECK(std::binary_search(grown.begin(), grown.end(), std::vector<int>{0, 1, 1}));
}

TEST_CASE("minimalization prunes tuples that extend to no solution") {
  AlgebraRef z2 = sbm::lookup_algebra("z2");
  Instance inst = group_instance("z2", 2, {sum_equals(z2, 0, 1, 0)});
  Constraint pin;
  pin.scope = {0};
  pin.tuples = {{1}};
  inst.constraints.push_back(pin);
  sbm::MinimalizeResult res = sbm::minimalize_maltsev(inst);
  REQUIRE_FALSE(res.unsat);
  // The sum constraint loses the tuple starting at 0.
  CHECK(res.instance.constraints[0].tuples == std::vector<std::vector<int>>{{1, 1}});

  Instance bad = group_instance(
      "z2", 2, {sum_equals(z2, 0, 1, 0), sum_equals(z2, 0, 1, 1)});
  CHECK(sbm::minimalize_maltsev(bad).unsat);
}

TEST_CASE("oversized search spaces are refused") {
  Instance inst;
  AlgebraRef z4 = sbm::lookup_algebra("z4");
  for (int v = 0; v < 13; ++v) {
    inst.var_names.push_back("v" + std::to_string(v));
    inst.domains.push_back(z4);
  }
  CHECK(error_kind_of([&] { sbm::brute_solve(inst, 1); }) == ErrorKind::TooLarge);
}
