#pragma once

#include <optional>
#include <vector>

#include "sbm/algebra.hpp"
#include "sbm/congruence.hpp"
#include "sbm/polynomial.hpp"

namespace sbm {

// f moves some beta pair outside alpha.
bool separates_interval(const MapTable& f, const Congruence& alpha, const Congruence& beta);

// Inclusion-minimal images of unary polynomials separating (alpha, beta),
// sorted element lists in canonical order.
std::vector<std::vector<int>> minimal_sets(const FiniteAlgebra& alg, const Congruence& alpha,
                                           const Congruence& beta);

bool is_minimal_set(const FiniteAlgebra& alg, const Congruence& alpha, const Congruence& beta,
                    const std::vector<int>& candidate);

// Arena index of an idempotent unary polynomial with exactly this image.
std::optional<int> idempotent_with_image(const AlgebraRef& alg, const std::vector<int>& image);

// Mutually inverse unary polynomials carrying `from` onto `to`.
struct IsoPair {
  int p_idx;  // p(from) = to
  int q_idx;  // q(to) = from, q(p(x)) = x on from, p(q(y)) = y on to
};
std::optional<IsoPair> minimal_set_iso(const AlgebraRef& alg, const std::vector<int>& from,
                                       const std::vector<int>& to);

// Arena index of a polynomial inverting f on the set U, so q(f(x)) = x there.
std::optional<int> left_inverse_on(const AlgebraRef& alg, const MapTable& f,
                                   const std::vector<int>& U);

std::vector<int> image_of_map(const MapTable& f);
std::vector<int> image_of_set(const MapTable& f, const std::vector<int>& set);

}  // namespace sbm
