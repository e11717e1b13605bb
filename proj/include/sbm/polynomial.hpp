#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "sbm/algebra.hpp"

namespace sbm {

// Unary map on an algebra's universe, as a value table.
using MapTable = std::vector<int>;

// f after g.
MapTable compose_maps(const MapTable& f, const MapTable& g);
bool is_idempotent_map(const MapTable& f);
// Least power f^k (k >= 1) that is idempotent.
MapTable idempotent_power(const MapTable& f);

// One step of a straight-line derivation of a polynomial from the identity
// and constant tuples. References: -1 is the identity generator, -(k+2) is
// constant tuple k, values >= 0 refer to earlier steps. Dot and M apply the
// operations componentwise; Compose substitutes argument b into a.
struct SlpStep {
  enum class Op : std::uint8_t { Dot, M, Compose };
  Op op;
  int a;
  int b;
  int c;  // used by M only
};

// A polynomial of a relation: one unary map per coordinate, derived from the
// identity and constant tuples of the relation by the recorded trace. The
// trace makes the polynomial replayable on any relation containing tuples
// that project onto the recorded constants.
struct PolynomialWitness {
  std::vector<int> scope;                   // host coordinate ids, may repeat
  std::vector<MapTable> components;         // one map per scope position
  std::vector<std::vector<int>> constants;  // constant tuples over the scope
  std::vector<SlpStep> trace;
  int root = -1;
};

inline constexpr std::size_t kDefaultClosureBudget = 1'000'000;

// Closure of {identity} plus constant tuples under componentwise dot and m.
// The budget bounds the number of admitted elements.
class PolyArena {
 public:
  PolyArena(std::vector<AlgebraRef> coords, std::vector<int> scope,
            std::vector<std::vector<int>> constants,
            std::size_t budget = kDefaultClosureBudget);

  std::size_t size() const { return packs_.size(); }
  const std::vector<AlgebraRef>& coords() const { return coords_; }
  const std::vector<int>& scope() const { return scope_; }
  int identity_index() const { return identity_index_; }

  int map_entry(std::size_t idx, int coord, int x) const {
    return static_cast<unsigned char>(packs_[idx][offsets_[coord] + x]);
  }
  std::vector<MapTable> maps(std::size_t idx) const;
  int find_maps(const std::vector<MapTable>& maps) const;  // -1 if absent
  PolynomialWitness witness(std::size_t idx) const;

  // Copy whose witnesses carry the given scope labels; the closure content is
  // identical, so rescoping a cached arena costs a copy, not a re-closure.
  PolyArena rescoped(std::vector<int> scope) const;

 private:
  struct Prov {
    std::uint8_t op;  // 0 identity, 1 constant (a = constant index), 2 dot, 3 m
    int a;
    int b;
    int c;
  };

  // Packed-key open-addressed dedup used while closing; viable whenever the
  // concatenated value tables fit in 16 bytes.
  using FastKey = std::pair<std::uint64_t, std::uint64_t>;
  FastKey fast_key(const std::string& pack) const;
  void fast_grow();

  int insert(const std::string& pack, Prov prov, std::size_t budget);
  void close(std::size_t budget);
  std::string pack_of_maps(const std::vector<MapTable>& maps) const;

  std::vector<AlgebraRef> coords_;
  std::vector<int> scope_;
  std::vector<std::vector<int>> constants_;
  std::vector<int> offsets_;
  int total_len_ = 0;
  int identity_index_ = -1;
  std::vector<std::string> packs_;
  std::vector<Prov> provs_;
  std::unordered_map<std::string, int> index_;
  bool fast_ = false;
  std::size_t fast_count_ = 0;
  std::vector<std::pair<FastKey, int>> fast_slots_;
};

// Cached closure of the unary polynomials of one algebra (scope {0}).
const PolyArena& unary_arena(const AlgebraRef& alg);

// Value tables of all unary polynomials, sorted.
std::vector<MapTable> unary_polynomial_monoid(const FiniteAlgebra& alg);

PolynomialWitness identity_witness(const std::vector<AlgebraRef>& coords,
                                   const std::vector<int>& scope);
PolynomialWitness constant_witness(const std::vector<AlgebraRef>& coords,
                                   const std::vector<int>& scope, const std::vector<int>& tuple);
PolynomialWitness compose_witnesses(const std::vector<AlgebraRef>& coords,
                                    const PolynomialWitness& f, const PolynomialWitness& g);
PolynomialWitness pointwise_dot_witness(const std::vector<AlgebraRef>& coords,
                                        const PolynomialWitness& f, const PolynomialWitness& g);
PolynomialWitness pointwise_m_witness(const std::vector<AlgebraRef>& coords,
                                      const PolynomialWitness& f, const PolynomialWitness& g,
                                      const PolynomialWitness& h);
PolynomialWitness idempotent_power_witness(const std::vector<AlgebraRef>& coords,
                                           const PolynomialWitness& f);

// Recomputes the witness on another relation. positions[j] locates w.scope[j]
// inside host_scope; each recorded constant is mapped to the lexicographically
// least host tuple agreeing with it at those positions. The replayed
// components agree with the original on the shared coordinates.
PolynomialWitness replay_witness(const PolynomialWitness& w,
                                 const std::vector<AlgebraRef>& host_coords,
                                 const std::vector<int>& host_scope,
                                 const std::vector<std::vector<int>>& host_tuples,
                                 const std::vector<int>& positions);

// Recomputes components from the trace alone; used to validate witnesses.
std::vector<MapTable> evaluate_witness(const std::vector<AlgebraRef>& coords,
                                       const PolynomialWitness& w);

}  // namespace sbm
