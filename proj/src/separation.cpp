#include "sbm/separation.hpp"

#include <algorithm>
#include <string>

#include "sbm/error.hpp"
#include "sbm/polynomial.hpp"

namespace sbm {

namespace {

// f maps every delta pair into gamma.
bool collapses_interval(const MapTable& f, const Congruence& gamma, const Congruence& delta) {
  return !separates_interval(f, gamma, delta);
}

// Post-composes with x -> dot(x, amax) coordinatewise, then takes the
// idempotent power. Keeps every image inside the max blocks.
PolynomialWitness maxproj_ipow(const Relation& rel, const PolynomialWitness& w) {
  std::vector<int> amax = least_max_tuple(rel);
  PolynomialWitness cw = constant_witness(rel.domains, rel.scope, amax);
  PolynomialWitness pushed = pointwise_dot_witness(rel.domains, w, cw);
  return idempotent_power_witness(rel.domains, pushed);
}

bool images_in_max(const Relation& rel, const PolynomialWitness& w) {
  for (std::size_t p = 0; p < rel.scope.size(); ++p) {
    const SbmCertificate& cert = certificate_for(rel.domains[p]);
    for (int v : image_of_map(w.components[p])) {
      if (!std::binary_search(cert.max_block.begin(), cert.max_block.end(), v)) return false;
    }
  }
  return true;
}

bool fixes_pointwise(const MapTable& f, const std::vector<int>& set) {
  for (int x : set) {
    if (f[static_cast<std::size_t>(x)] != x) return false;
  }
  return true;
}

// The binary relation whose polynomial pairs drive the separability query of
// coordinate i against coordinate j; i == j goes through the diagonal.
Relation separation_relation(const Relation& rel, int i, int j) {
  if (i == j) {
    return diagonal_relation(rel.domains[static_cast<std::size_t>(i)],
                             rel.scope[static_cast<std::size_t>(i)]);
  }
  return project(rel, {i, j});
}

struct TriplePlan {
  IntervalTriple triple;
  bool separable = false;
};

// One collapse factor for a separable triple: the separating pair witness is
// replayed onto the full relation, then sandwiched so its i-th component is
// an idempotent map fixing set_u pointwise with image exactly set_u.
PolynomialWitness sandwich_selected(const Relation& rel, int i, const Congruence& alpha,
                                    const Congruence& beta, const std::vector<int>& set_u,
                                    const PolynomialWitness& g_full) {
  const AlgebraRef& dom_i = rel.domains[static_cast<std::size_t>(i)];
  const MapTable& gi = g_full.components[static_cast<std::size_t>(i)];

  // Minimal set where the separation survives, with a witnessing pair.
  const std::vector<int>* survived = nullptr;
  std::vector<std::vector<int>> msets = minimal_sets(*dom_i, alpha, beta);
  for (const auto& cand : msets) {
    bool ok = false;
    for (std::size_t x = 0; x < cand.size() && !ok; ++x) {
      for (std::size_t y = 0; y < cand.size() && !ok; ++y) {
        if (beta.related(cand[x], cand[y]) && !alpha.related(cand[x], cand[y]) &&
            !alpha.related(gi[static_cast<std::size_t>(cand[x])],
                           gi[static_cast<std::size_t>(cand[y])])) {
          ok = true;
        }
      }
    }
    if (ok) {
      survived = &cand;
      break;
    }
  }
  require_internal(survived != nullptr, "separating polynomial keeps no minimal set apart");
  const std::vector<int>& set_star = *survived;

  // Left inverse recovering set_star through the separating map, then an
  // idempotent landing back on set_star.
  std::optional<int> q_idx = left_inverse_on(dom_i, gi, set_star);
  require_internal(q_idx.has_value(), "restriction of separating polynomial has no left inverse");
  std::optional<int> e_idx = idempotent_with_image(dom_i, set_star);
  require_internal(e_idx.has_value(), "minimal set carries no idempotent polynomial");

  PolynomialWitness q_lift = lift_unary(rel, i, *q_idx);
  PolynomialWitness e_lift = lift_unary(rel, i, *e_idx);
  PolynomialWitness sandwiched =
      compose_witnesses(rel.domains, e_lift, compose_witnesses(rel.domains, q_lift, g_full));

  if (set_star != set_u) {
    std::optional<IsoPair> iso = minimal_set_iso(dom_i, set_star, set_u);
    require_internal(iso.has_value(), "minimal sets of one prime interval are not isomorphic");
    PolynomialWitness p_lift = lift_unary(rel, i, iso->p_idx);
    PolynomialWitness q2_lift = lift_unary(rel, i, iso->q_idx);
    sandwiched =
        compose_witnesses(rel.domains, p_lift, compose_witnesses(rel.domains, sandwiched, q2_lift));
  }

  PolynomialWitness out = maxproj_ipow(rel, sandwiched);
  require_internal(fixes_pointwise(out.components[static_cast<std::size_t>(i)], set_u),
                   "collapse factor moved the target minimal set");
  require_internal(image_of_map(out.components[static_cast<std::size_t>(i)]) == set_u,
                   "collapse factor image differs from the target minimal set");
  return out;
}

}  // namespace

bool interval_triple_less(const IntervalTriple& a, const IntervalTriple& b) {
  if (a.var != b.var) return a.var < b.var;
  if (congruence_less(a.alpha, b.alpha)) return true;
  if (congruence_less(b.alpha, a.alpha)) return false;
  return congruence_less(a.beta, b.beta);
}

std::vector<int> least_max_tuple(const Relation& rel) {
  for (const auto& t : rel.tuples) {
    if (tuple_in_max(rel.domains, t)) return t;
  }
  fail(ErrorKind::InternalInvariantViolated, "relation has no tuple of max-block values");
}

std::vector<IntervalTriple> relation_interval_triples(const Relation& rel) {
  std::vector<IntervalTriple> out;
  for (std::size_t p = 0; p < rel.domains.size(); ++p) {
    const SbmCertificate& cert = certificate_for(rel.domains[p]);
    for (const PrimeInterval& pi : prime_intervals_below(*rel.domains[p], cert.theta)) {
      out.push_back(IntervalTriple{static_cast<int>(p), pi.alpha, pi.beta});
    }
  }
  return out;
}

std::optional<PolynomialWitness> can_separate(const Relation& rel2, const IntervalTriple& t1,
                                              const IntervalTriple& t2) {
  if (rel2.scope.size() != 2) fail(ErrorKind::BadIndex, "separation query needs a binary relation");
  const PolyArena& arena = pair_arena(rel2);
  std::vector<int> amax = least_max_tuple(rel2);
  const FiniteAlgebra& a0 = *rel2.domains[0];
  const FiniteAlgebra& a1 = *rel2.domains[1];
  const int n0 = a0.size();
  const int n1 = a1.size();

  for (std::size_t idx = 0; idx < arena.size(); ++idx) {
    MapTable f0(static_cast<std::size_t>(n0));
    for (int x = 0; x < n0; ++x) f0[static_cast<std::size_t>(x)] = arena.map_entry(idx, 0, x);
    if (!separates_interval(f0, t1.alpha, t1.beta)) continue;
    MapTable f1(static_cast<std::size_t>(n1));
    for (int x = 0; x < n1; ++x) f1[static_cast<std::size_t>(x)] = arena.map_entry(idx, 1, x);
    if (!collapses_interval(f1, t2.alpha, t2.beta)) continue;

    // Push both components toward the max blocks. A collapse survives any
    // post-composition; the separation must survive dot with a max value.
    MapTable g0(f0.size());
    for (std::size_t x = 0; x < f0.size(); ++x) g0[x] = a0.dot(f0[x], amax[0]);
    if (!separates_interval(g0, t1.alpha, t1.beta)) continue;
    MapTable g1(f1.size());
    for (std::size_t x = 0; x < f1.size(); ++x) g1[x] = a1.dot(f1[x], amax[1]);
    require_internal(collapses_interval(g1, t2.alpha, t2.beta),
                     "post-composition broke a congruence collapse");

    PolynomialWitness w = arena.witness(idx);
    PolynomialWitness cw = constant_witness(rel2.domains, rel2.scope, amax);
    return pointwise_dot_witness(rel2.domains, w, cw);
  }
  return std::nullopt;
}

bool alignment_check(const Relation& rel2, const PrimeInterval& at0, const PrimeInterval& at1) {
  if (rel2.scope.size() != 2) fail(ErrorKind::BadIndex, "alignment check needs a binary relation");
  std::vector<int> split0 = split_elements(*rel2.domains[0], at0.alpha, at0.beta);
  std::vector<int> split1 = split_elements(*rel2.domains[1], at1.alpha, at1.beta);
  for (const auto& t : rel2.tuples) {
    bool s0 = std::binary_search(split0.begin(), split0.end(), t[0]);
    bool s1 = std::binary_search(split1.begin(), split1.end(), t[1]);
    if (s0 != s1) return false;
  }
  return true;
}

PolynomialWitness lift_unary(const Relation& rel, int pos, int arena_idx) {
  const PolyArena& arena = unary_arena(rel.domains[static_cast<std::size_t>(pos)]);
  PolynomialWitness w = arena.witness(static_cast<std::size_t>(arena_idx));
  return replay_witness(w, rel.domains, rel.scope, rel.tuples, {pos});
}

bool triples_separable(const Relation& rel, const IntervalTriple& t1, int i,
                       const IntervalTriple& t2, int j) {
  Relation rel2 = separation_relation(rel, i, j);
  return can_separate(rel2, t1, t2).has_value();
}

PolynomialWitness collapsing_polynomial(const Relation& rel, const IntervalTriple& t,
                                        const std::vector<int>& a, int b) {
  const int i = t.var;
  if (i < 0 || static_cast<std::size_t>(i) >= rel.scope.size()) {
    fail(ErrorKind::BadIndex, "collapse coordinate out of range");
  }
  const AlgebraRef& dom_i = rel.domains[static_cast<std::size_t>(i)];
  if (b < 0 || b >= dom_i->size()) {
    fail(ErrorKind::ElementOutOfDomain, "collapse target out of domain");
  }
  if (!rel.contains(a)) {
    fail(ErrorKind::PreconditionViolated, "collapse anchor is not a tuple of the relation");
  }
  if (!tuple_in_max(rel.domains, a)) {
    fail(ErrorKind::PreconditionViolated, "collapse anchor must take max-block values");
  }
  const int ai = a[static_cast<std::size_t>(i)];
  if (!t.beta.related(ai, b) || t.alpha.related(ai, b)) {
    fail(ErrorKind::PreconditionViolated, "collapse pair must straddle the prime interval");
  }

  const Congruence& alpha = t.alpha;
  const Congruence& beta = t.beta;

  // Target minimal set: least one meeting both alpha classes of the pair.
  std::vector<int> set_u;
  for (const auto& cand : minimal_sets(*dom_i, alpha, beta)) {
    bool meets_a = false;
    bool meets_b = false;
    for (int v : cand) {
      if (alpha.related(v, ai)) meets_a = true;
      if (alpha.related(v, b)) meets_b = true;
    }
    if (meets_a && meets_b) {
      set_u = cand;
      break;
    }
  }
  require_internal(!set_u.empty(), "no minimal set meets both classes of the collapse pair");

  // Separability of (i, alpha, beta) from every triple of the relation.
  std::vector<TriplePlan> plans;
  std::vector<PolynomialWitness> selected;
  {
    IntervalTriple here{0, alpha, beta};
    for (const IntervalTriple& other : relation_interval_triples(rel)) {
      const int j = other.var;
      Relation rel2 = separation_relation(rel, i, j);
      std::optional<PolynomialWitness> w = can_separate(rel2, here, other);
      plans.push_back(TriplePlan{other, w.has_value()});
      if (w.has_value()) {
        selected.push_back(replay_witness(*w, rel.domains, rel.scope, rel.tuples, {i, j}));
      }
    }
  }

  // Base polynomial: composition of one sandwiched collapse factor per
  // separable triple, or the bare idempotent onto set_u when none exist.
  PolynomialWitness h;
  bool have_factor = false;
  for (std::size_t k = 0; k < selected.size(); ++k) {
    PolynomialWitness factor = sandwich_selected(rel, i, alpha, beta, set_u, selected[k]);
    h = have_factor ? compose_witnesses(rel.domains, factor, h) : factor;
    have_factor = true;
  }
  if (!have_factor) {
    std::optional<int> e_idx = idempotent_with_image(dom_i, set_u);
    require_internal(e_idx.has_value(), "minimal set carries no idempotent polynomial");
    h = lift_unary(rel, i, *e_idx);
  }
  h = maxproj_ipow(rel, h);

  auto check_stage = [&](const PolynomialWitness& w) {
    require_internal(separates_interval(w.components[static_cast<std::size_t>(i)], alpha, beta),
                     "collapse construction lost the separation at its own coordinate");
    for (const TriplePlan& plan : plans) {
      if (!plan.separable) continue;
      const int j = plan.triple.var;
      require_internal(collapses_interval(w.components[static_cast<std::size_t>(j)],
                                          plan.triple.alpha, plan.triple.beta),
                       "collapse construction lost a collapsed triple");
    }
  };
  check_stage(h);

  auto potential = [](const PolynomialWitness& w) {
    std::size_t total = 0;
    for (const MapTable& comp : w.components) total += image_of_map(comp).size();
    return total;
  };

  // Shrink non-separable coordinates onto minimal images, re-anchoring the
  // i-th image on set_u whenever a shrink moves it.
  constexpr int kMaxRounds = 4096;
  int rounds = 0;
  for (;;) {
    require_internal(++rounds <= kMaxRounds, "image shrinking failed to stabilize");
    bool changed = false;
    for (const TriplePlan& plan : plans) {
      if (plan.separable) continue;
      const int j = plan.triple.var;
      const AlgebraRef& dom_j = rel.domains[static_cast<std::size_t>(j)];
      const MapTable& hj = h.components[static_cast<std::size_t>(j)];
      std::vector<int> image_j = image_of_map(hj);
      if (is_minimal_set(*dom_j, plan.triple.alpha, plan.triple.beta, image_j)) continue;

      // Non-separable triples keep their interval apart, so a minimal set
      // with a surviving pair must exist.
      std::vector<int> shrink_to;
      for (const auto& cand : minimal_sets(*dom_j, plan.triple.alpha, plan.triple.beta)) {
        bool ok = false;
        for (std::size_t x = 0; x < cand.size() && !ok; ++x) {
          for (std::size_t y = 0; y < cand.size() && !ok; ++y) {
            if (plan.triple.beta.related(cand[x], cand[y]) &&
                !plan.triple.alpha.related(cand[x], cand[y]) &&
                !plan.triple.alpha.related(hj[static_cast<std::size_t>(cand[x])],
                                           hj[static_cast<std::size_t>(cand[y])])) {
              ok = true;
            }
          }
        }
        if (ok) {
          shrink_to = image_of_set(hj, cand);
          break;
        }
      }
      require_internal(!shrink_to.empty(), "non-separable coordinate collapsed its own interval");

      std::optional<int> e_idx = idempotent_with_image(dom_j, shrink_to);
      require_internal(e_idx.has_value(), "shrunk image carries no idempotent polynomial");
      std::size_t before = potential(h);
      PolynomialWitness e_lift = lift_unary(rel, j, *e_idx);
      PolynomialWitness next = maxproj_ipow(rel, compose_witnesses(rel.domains, e_lift, h));
      check_stage(next);
      require_internal(potential(next) < before, "image shrinking did not reduce the image count");
      h = next;
      changed = true;
      break;
    }
    if (changed) continue;

    // Re-anchor the i-th image on set_u; a moved image lands on an
    // isomorphic minimal set and conjugation restores set_u.
    std::vector<int> image_i = image_of_map(h.components[static_cast<std::size_t>(i)]);
    if (image_i == set_u) break;
    require_internal(is_minimal_set(*dom_i, alpha, beta, image_i),
                     "surviving coordinate image is not a minimal set");
    std::optional<IsoPair> iso = minimal_set_iso(dom_i, image_i, set_u);
    require_internal(iso.has_value(), "minimal sets of one prime interval are not isomorphic");
    PolynomialWitness p_lift = lift_unary(rel, i, iso->p_idx);
    PolynomialWitness q_lift = lift_unary(rel, i, iso->q_idx);
    h = maxproj_ipow(rel,
                     compose_witnesses(rel.domains, p_lift, compose_witnesses(rel.domains, h, q_lift)));
    check_stage(h);
  }

  require_internal(fixes_pointwise(h.components[static_cast<std::size_t>(i)], set_u),
                   "stabilized polynomial does not fix the target minimal set");
  require_internal(images_in_max(rel, h), "stabilized polynomial leaves the max blocks");

  // Twist toward the anchor so a becomes a fixed point.
  std::vector<int> ha(rel.scope.size());
  for (std::size_t p = 0; p < rel.scope.size(); ++p) {
    ha[p] = h.components[p][static_cast<std::size_t>(a[p])];
  }
  require_internal(rel.contains(ha), "polynomial image of the anchor left the relation");
  PolynomialWitness const_ha = constant_witness(rel.domains, rel.scope, ha);
  PolynomialWitness const_a = constant_witness(rel.domains, rel.scope, a);
  PolynomialWitness f = pointwise_m_witness(rel.domains, h, const_ha, const_a);
  f = idempotent_power_witness(rel.domains, f);

  // Contract checks: fixed anchor, target lands near b, separable triples
  // collapsed, non-separable coordinates keep minimal images.
  for (std::size_t p = 0; p < rel.scope.size(); ++p) {
    require_internal(f.components[p][static_cast<std::size_t>(a[p])] == a[p],
                     "collapsing polynomial moved the anchor");
  }
  require_internal(
      alpha.related(f.components[static_cast<std::size_t>(i)][static_cast<std::size_t>(b)], b),
      "collapsing polynomial moved the target off its class");
  for (const TriplePlan& plan : plans) {
    const int j = plan.triple.var;
    const MapTable& fj = f.components[static_cast<std::size_t>(j)];
    if (plan.separable) {
      require_internal(collapses_interval(fj, plan.triple.alpha, plan.triple.beta),
                       "collapsing polynomial failed a required collapse");
    } else {
      require_internal(is_minimal_set(*rel.domains[static_cast<std::size_t>(j)], plan.triple.alpha,
                                      plan.triple.beta, image_of_map(fj)),
                       "collapsing polynomial lost minimality at a coordinate");
    }
  }
  return f;
}

}  // namespace sbm
