#include "sbm/ensemble.hpp"

#include <algorithm>
#include <optional>
#include <ostream>

#include "sbm/propagation.hpp"
#include "sbm/relation.hpp"
#include "sbm/sbm_structure.hpp"
#include "sbm/separation.hpp"

namespace sbm {

namespace {

int position_of(const std::vector<int>& sorted_vars, int v) {
  auto it = std::lower_bound(sorted_vars.begin(), sorted_vars.end(), v);
  if (it == sorted_vars.end() || *it != v) return -1;
  return static_cast<int>(it - sorted_vars.begin());
}

// Value at u from the first class covering u; condition (2) makes the choice
// of class irrelevant modulo gamma_u. nullopt when no triple mentions u.
std::optional<int> covered_value(const CoherentIndex& index, const Ensemble& ens, int u) {
  for (std::size_t t = 0; t < index.triples.size(); ++t) {
    const auto& vars = index.class_vars[index.class_of[t]];
    int pos = position_of(vars, u);
    if (pos >= 0) return ens.solutions[t][pos];
  }
  return std::nullopt;
}

// A variable carries no triple exactly when its theta is trivial, which
// forces a one-element max block; that element stands in for the variable in
// every quotient check.
int uncovered_value(const Instance& inst, int u) {
  const SbmCertificate& cert = certificate_for(inst.domains[u]);
  require_internal(cert.max_block.size() == 1,
                   "variable without triples has a wide max block");
  return cert.max_block[0];
}

}  // namespace

void verify_ensemble(const Instance& inst, const CoherentIndex& index, const Ensemble& ens,
                     ErrorKind kind) {
  int n = inst.num_vars();
  if (static_cast<int>(ens.gamma.size()) != n ||
      ens.solutions.size() != index.triples.size())
    fail(kind, "ensemble shape does not match the instance");
  for (int v = 0; v < n; ++v) {
    const SbmCertificate& cert = certificate_for(inst.domains[v]);
    if (ens.gamma[v].size() != inst.domains[v]->size() ||
        !is_congruence(*inst.domains[v], ens.gamma[v]) ||
        !finer_or_equal(ens.gamma[v], cert.theta))
      fail(kind, "gamma at " + inst.var_names[v] + " is not a congruence below theta");
  }

  // Condition (1): each solution solves its class subinstance.
  std::vector<std::optional<Instance>> subs(index.num_classes);
  for (std::size_t t = 0; t < index.triples.size(); ++t) {
    int c = index.class_of[t];
    const auto& vars = index.class_vars[c];
    const auto& sol = ens.solutions[t];
    if (sol.size() != vars.size()) fail(kind, "solution arity differs from its class");
    for (std::size_t j = 0; j < vars.size(); ++j)
      if (sol[j] < 0 || sol[j] >= inst.domains[vars[j]]->size())
        fail(kind, "solution value outside its domain");
    if (!subs[c]) subs[c] = restrict_to(inst, vars);
    if (!satisfies(*subs[c], sol)) fail(kind, "a solution fails its class subinstance");
  }

  // Condition (2): overlap agreement modulo gamma.
  for (std::size_t t1 = 0; t1 < index.triples.size(); ++t1) {
    const auto& vars1 = index.class_vars[index.class_of[t1]];
    for (std::size_t t2 = t1 + 1; t2 < index.triples.size(); ++t2) {
      const auto& vars2 = index.class_vars[index.class_of[t2]];
      for (std::size_t j = 0; j < vars1.size(); ++j) {
        int pos2 = position_of(vars2, vars1[j]);
        if (pos2 < 0) continue;
        if (!ens.gamma[vars1[j]].related(ens.solutions[t1][j], ens.solutions[t2][pos2]))
          fail(kind, "solutions disagree modulo gamma at " + inst.var_names[vars1[j]]);
      }
    }
  }

  // Condition (3): the assembled gamma-quotient tuple of every constraint
  // belongs to the quotiented relation.
  for (const auto& c : inst.constraints) {
    std::vector<int> target(c.scope.size());
    for (std::size_t p = 0; p < c.scope.size(); ++p) {
      int u = c.scope[p];
      std::optional<int> val = covered_value(index, ens, u);
      if (!val) val = uncovered_value(inst, u);
      target[p] = ens.gamma[u].block_of[*val];
    }
    bool member = false;
    for (const auto& tup : c.tuples) {
      bool same = true;
      for (std::size_t p = 0; p < c.scope.size() && same; ++p)
        same = ens.gamma[c.scope[p]].block_of[tup[p]] == target[p];
      if (same) {
        member = true;
        break;
      }
    }
    if (!member) fail(kind, "assembled quotient tuple misses a constraint");
  }
}

Ensemble initial_ensemble(const Instance& inst, const CoherentIndex& index) {
  int n = inst.num_vars();
  Ensemble ens;
  ens.gamma.reserve(n);
  for (int v = 0; v < n; ++v) ens.gamma.push_back(certificate_for(inst.domains[v]).theta);
  ens.solutions.resize(index.triples.size());
  for (int c = 0; c < index.num_classes; ++c) {
    const auto& vars = index.class_vars[c];
    std::vector<AlgebraRef> doms;
    doms.reserve(vars.size());
    for (int u : vars) doms.push_back(inst.domains[u]);
    std::optional<std::vector<int>> pick;
    for (const auto& sol : partial_solutions(inst, vars)) {
      if (tuple_in_max(doms, sol)) {
        pick = sol;
        break;
      }
    }
    if (!pick) fail(ErrorKind::NoMaxSolution, "no all-max solution on a coherent class");
    for (int t : index.class_members[c]) ens.solutions[t] = *pick;
  }
  verify_ensemble(inst, index, ens, ErrorKind::InternalInvariantViolated);
  return ens;
}

Ensemble initial_ensemble(const Instance& inst) {
  return initial_ensemble(inst, coherent_sets(inst));
}

Ensemble ensemble_descend(const Instance& inst, const CoherentIndex& index, const Ensemble& ens,
                          int v, const Congruence& beta_v) {
  int n = inst.num_vars();
  if (v < 0 || v >= n) fail(ErrorKind::BadIndex, "descent variable out of range");
  if (static_cast<int>(ens.gamma.size()) != n || ens.solutions.size() != index.triples.size())
    fail(ErrorKind::PreconditionViolated, "ensemble shape does not match the instance");
  const AlgebraRef& dom_v = inst.domains[v];
  const Congruence& gamma_v = ens.gamma[v];
  if (beta_v.size() != dom_v->size() || !is_congruence(*dom_v, beta_v))
    fail(ErrorKind::PreconditionViolated, "descent target is not a congruence");
  bool covering = false;
  for (const auto& pi : prime_intervals_below(*dom_v, gamma_v))
    if (pi.beta == gamma_v && pi.alpha == beta_v) {
      covering = true;
      break;
    }
  if (!covering)
    fail(ErrorKind::PreconditionViolated, "descent target is not covered by the current gamma");

  int ref = -1;
  for (std::size_t t = 0; t < index.triples.size(); ++t) {
    const IntervalTriple& tr = index.triples[t];
    if (tr.var == v && tr.alpha == beta_v && tr.beta == gamma_v) {
      ref = static_cast<int>(t);
      break;
    }
  }
  if (ref < 0) fail(ErrorKind::PreconditionViolated, "descent interval has no triple");

  const auto& ref_vars = index.class_vars[index.class_of[ref]];
  const auto& phi_ref = ens.solutions[ref];
  int pos_ref_v = position_of(ref_vars, v);
  require_internal(pos_ref_v >= 0, "reference class misses its own variable");
  int x0 = phi_ref[pos_ref_v];

  Ensemble out;
  out.gamma = ens.gamma;
  out.gamma[v] = beta_v;
  out.solutions = ens.solutions;

  // When the gamma block at the reference value is already a single beta
  // block, every covering solution lands in it and nothing moves.
  std::vector<int> gamma_block;
  std::vector<int> beta_block;
  for (int x = 0; x < dom_v->size(); ++x) {
    if (gamma_v.related(x, x0)) gamma_block.push_back(x);
    if (beta_v.related(x, x0)) beta_block.push_back(x);
  }
  if (gamma_block == beta_block) {
    verify_ensemble(inst, index, out, ErrorKind::DescentFailed);
    return out;
  }

  for (std::size_t t = 0; t < index.triples.size(); ++t) {
    const auto& uvars = index.class_vars[index.class_of[t]];
    int pos_v = position_of(uvars, v);
    if (pos_v < 0) continue;
    const auto& psi = ens.solutions[t];
    if (beta_v.related(psi[pos_v], x0)) continue;

    std::vector<AlgebraRef> doms;
    doms.reserve(uvars.size());
    for (int u : uvars) doms.push_back(inst.domains[u]);
    Relation class_solutions = make_relation(uvars, doms, partial_solutions(inst, uvars));
    PolynomialWitness f =
        collapsing_polynomial(class_solutions, IntervalTriple{pos_v, beta_v, gamma_v}, psi, x0);

    // Spliced solution: the collapsing polynomial applied to the reference
    // values on the shared variables, the old solution elsewhere.
    std::vector<int> spliced = psi;
    for (std::size_t j = 0; j < uvars.size(); ++j) {
      int pos_w = position_of(ref_vars, uvars[j]);
      if (pos_w < 0) continue;
      spliced[j] = f.components[j][phi_ref[pos_w]];
    }
    if (!std::binary_search(class_solutions.tuples.begin(), class_solutions.tuples.end(),
                            spliced))
      fail(ErrorKind::DescentFailed, "spliced assignment is not a class solution");
    out.solutions[t] = spliced;
  }
  verify_ensemble(inst, index, out, ErrorKind::DescentFailed);
  return out;
}

Ensemble ensemble_descend(const Instance& inst, const Ensemble& ens, int v,
                          const Congruence& beta_v) {
  return ensemble_descend(inst, coherent_sets(inst), ens, v, beta_v);
}

std::vector<int> full_descent(const Instance& inst, DescentOrder order, std::ostream* log) {
  CoherentIndex index = coherent_sets(inst);
  Ensemble ens = initial_ensemble(inst, index);
  int n = inst.num_vars();
  int step = 0;
  for (int k = 0; k < n; ++k) {
    int v = order == DescentOrder::Forward ? k : n - 1 - k;
    const FiniteAlgebra& dom = *inst.domains[v];
    while (ens.gamma[v] != zero_congruence(dom.size())) {
      std::vector<Congruence> covered;
      for (const auto& pi : prime_intervals_below(dom, ens.gamma[v]))
        if (pi.beta == ens.gamma[v]) covered.push_back(pi.alpha);
      require_internal(!covered.empty(), "nonzero congruence covers nothing");
      std::sort(covered.begin(), covered.end(), congruence_less);
      const Congruence& target =
          order == DescentOrder::Forward ? covered.front() : covered.back();
      Ensemble next = ensemble_descend(inst, index, ens, v, target);
      if (log) {
        *log << "{\"step\":" << step << ",\"var\":\"" << inst.var_names[v]
             << "\",\"gamma_blocks\":" << ens.gamma[v].num_blocks
             << ",\"beta_blocks\":" << target.num_blocks
             << ",\"spliced\":" << (next.solutions != ens.solutions ? "true" : "false") << "}\n";
      }
      ens = std::move(next);
      ++step;
    }
  }

  // Gamma is trivial everywhere, so covering solutions agree exactly.
  std::vector<int> psi(n);
  for (int v = 0; v < n; ++v) {
    std::optional<int> val = covered_value(index, ens, v);
    psi[v] = val ? *val : uncovered_value(inst, v);
  }
  require_internal(satisfies(inst, psi), "descent assembled a non-solution");
  return psi;
}

}  // namespace sbm
