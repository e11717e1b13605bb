#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <nlohmann/json.hpp>

#include "sbm/algebra.hpp"
#include "sbm/error.hpp"
#include "sbm/sbm_structure.hpp"
#include "support/checks.hpp"

using sbm::AlgebraRef;
using sbm::ErrorKind;
using testsupport::error_kind_of;

namespace {

const std::vector<int> kFixbDot = {0, 1, 2, 1, 1, 1, 2, 2, 2};
const std::vector<int> kFixbM = {0, 1, 2, 1, 2, 1, 2, 1, 2, 1, 2, 1, 2, 1,
                                 2, 1, 2, 1, 2, 1, 2, 1, 2, 1, 2, 1, 2};

}  // namespace

TEST_CASE("three element chain fixture carries the expected tables") {
  AlgebraRef fixb = sbm::lookup_algebra("fixb");
  REQUIRE(fixb->size() == 3);
  CHECK(fixb->dot_table() == kFixbDot);
  CHECK(fixb->m_table() == kFixbM);
  CHECK(fixb->dot(0, 1) == 1);
  CHECK(fixb->m(0, 1, 1) == 2);
  CHECK(fixb->m(1, 2, 2) == 1);
}

TEST_CASE("subuniverse generation on the chain fixture") {
  AlgebraRef fixb = sbm::lookup_algebra("fixb");
  CHECK(sbm::generate_subalgebra(*fixb, {1}) == std::vector<int>{1});
  CHECK(sbm::generate_subalgebra(*fixb, {0, 1}) == std::vector<int>{0, 1, 2});
  CHECK(sbm::generate_subalgebra(*fixb, {0, 2}) == std::vector<int>{0, 2});
  CHECK(sbm::generate_subalgebra(*fixb, {1, 2}) == std::vector<int>{1, 2});
  CHECK(error_kind_of([&] { sbm::generate_subalgebra(*fixb, {}); }) == ErrorKind::EmptySeed);
}

TEST_CASE("restriction to the top block is an affine group") {
  AlgebraRef fixb = sbm::lookup_algebra("fixb");
  AlgebraRef top = sbm::sub_algebra(*fixb, {1, 2}, "fixb_top");
  REQUIRE(top->size() == 2);
  CHECK(top->dot_table() == std::vector<int>{0, 0, 1, 1});
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) {
      CHECK(top->m(x, y, y) == x);
      CHECK(top->m(y, y, x) == x);
    }
}

TEST_CASE("constructor validation rejects malformed tables") {
  CHECK(error_kind_of([] {
          sbm::new_algebra(2, {0, 1, 1}, std::vector<int>(8, 0), "bad");
        }) == ErrorKind::NonTotalTable);
  CHECK(error_kind_of([] {
          sbm::new_algebra(2, {0, 5, 1, 1}, std::vector<int>(8, 0), "bad");
        }) == ErrorKind::NonTotalTable);
  // dot(0,0) = 1 breaks idempotency.
  CHECK(error_kind_of([] {
          std::vector<int> m(8);
          for (int x = 0; x < 2; ++x)
            for (int y = 0; y < 2; ++y)
              for (int z = 0; z < 2; ++z) m[(x * 2 + y) * 2 + z] = x;
          sbm::new_algebra(2, {1, 1, 1, 1}, m, "bad");
        }) == ErrorKind::NotIdempotent);
}

TEST_CASE("table signature ignores the name") {
  AlgebraRef fixb = sbm::lookup_algebra("fixb");
  AlgebraRef clone = sbm::new_algebra(3, kFixbDot, kFixbM, "renamed");
  CHECK(fixb->table_signature() == clone->table_signature());
  CHECK(fixb->name() != clone->name());
}

TEST_CASE("algebra json round trip preserves tables and name") {
  AlgebraRef fixb = sbm::lookup_algebra("fixb");
  nlohmann::json j = sbm::algebra_to_json(*fixb);
  CHECK(j.at("size") == 3);
  AlgebraRef back = sbm::algebra_from_json(j);
  CHECK(back->name() == fixb->name());
  CHECK(back->dot_table() == fixb->dot_table());
  CHECK(back->m_table() == fixb->m_table());
}

TEST_CASE("retract along an idempotent polynomial keeps operations") {
  AlgebraRef fixb = sbm::lookup_algebra("fixb");
  // e maps everything into {1, 2} and fixes both, so it is idempotent.
  std::vector<int> e = {1, 1, 2};
  AlgebraRef image = sbm::retract_algebra(*fixb, e, "fixb_e");
  REQUIRE(image->size() == 2);
  // Relabeled along sorted image {1, 2}: operations compose through e.
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      CHECK(image->dot(x, y) == (fixb->dot(x + 1, y + 1)) - 1);
}
