#pragma once

#include <optional>
#include <vector>

#include "sbm/congruence.hpp"
#include "sbm/minimal_sets.hpp"
#include "sbm/relation.hpp"
#include "sbm/sbm_structure.hpp"

namespace sbm {

// Prime interval alpha < beta <= theta at one variable or coordinate.
struct IntervalTriple {
  int var;
  Congruence alpha;
  Congruence beta;
};

bool interval_triple_less(const IntervalTriple& a, const IntervalTriple& b);

// Lexicographically least tuple whose entries all lie in max blocks. Exists
// for every nonempty subdirect relation over SBM domains.
std::vector<int> least_max_tuple(const Relation& rel);

// All prime interval triples below theta, per coordinate of the relation.
std::vector<IntervalTriple> relation_interval_triples(const Relation& rel);

// Polynomial pair moving t1's interval apart at coordinate 0 while collapsing
// t2's interval at coordinate 1. The returned witness is post-composed with
// dot toward the max blocks. The var fields of t1, t2 are not consulted.
std::optional<PolynomialWitness> can_separate(const Relation& rel2, const IntervalTriple& t1,
                                              const IntervalTriple& t2);

// True when no tuple mixes a split element at one coordinate with a non-split
// element at the other.
bool alignment_check(const Relation& rel2, const PrimeInterval& at0, const PrimeInterval& at1);

// Idempotent polynomial f of rel with f(a) = a, f_i(b) alpha-equivalent to b,
// that collapses every triple separable from (i, alpha, beta) and has
// minimal images at every non-separable triple's coordinate.
PolynomialWitness collapsing_polynomial(const Relation& rel, const IntervalTriple& t,
                                        const std::vector<int>& a, int b);

// Unary polynomial of one coordinate's domain, recomputed as a polynomial of
// the whole relation.
PolynomialWitness lift_unary(const Relation& rel, int pos, int arena_idx);

// Separability of (i, alpha, beta) from (j, gamma, delta) inside rel, with
// i == j routed through the diagonal relation.
bool triples_separable(const Relation& rel, const IntervalTriple& t1, int i,
                       const IntervalTriple& t2, int j);

}  // namespace sbm
