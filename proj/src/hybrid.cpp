#include "sbm/hybrid.hpp"

#include <algorithm>
#include <map>
#include <nlohmann/json.hpp>
#include <ostream>
#include <set>

#include "sbm/error.hpp"
#include "sbm/maltsev.hpp"
#include "sbm/propagation.hpp"
#include "sbm/sbm_structure.hpp"

namespace sbm {

namespace {

std::vector<std::vector<int>> identity_maps(const Instance& inst) {
  std::vector<std::vector<int>> maps(inst.var_names.size());
  for (std::size_t v = 0; v < inst.var_names.size(); ++v) {
    const int n = inst.domains[v]->size();
    maps[v].resize(static_cast<std::size_t>(n));
    for (int x = 0; x < n; ++x) maps[v][static_cast<std::size_t>(x)] = x;
  }
  return maps;
}

// outer[v] maps current labels to older ones; inner maps newer to current.
std::vector<std::vector<int>> compose_maps_per_var(const std::vector<std::vector<int>>& outer,
                                                   const std::vector<std::vector<int>>& inner) {
  std::vector<std::vector<int>> out(outer.size());
  for (std::size_t v = 0; v < outer.size(); ++v) {
    out[v].reserve(inner[v].size());
    for (int x : inner[v]) out[v].push_back(outer[v][static_cast<std::size_t>(x)]);
  }
  return out;
}

std::size_t total_tuples(const Instance& inst) {
  std::size_t n = 0;
  for (const Constraint& c : inst.constraints) n += c.tuples.size();
  return n;
}

struct Ctx {
  std::map<std::string, std::pair<bool, bool>> memo;  // key -> (sat, lossy)
  std::ostream* trace = nullptr;
  int depth = 0;
};

struct BlockInner {
  Instance instance;
  std::vector<std::vector<int>> value_of;
  bool unsat = false;
  bool lossy = false;
  std::string diagnostic;
};

BlockInner block_minimality_inner(Instance cur, Ctx& ctx);

// SAT decision for a class subinstance: nonempty block-minimal fixpoint
// certifies a solution. An uncertified UNSAT (after a lossy shrink) rejects.
bool class_sat(const Instance& sub, Ctx& ctx, bool& lossy_out) {
  const std::string key = instance_key(sub);
  auto hit = ctx.memo.find(key);
  if (hit != ctx.memo.end()) {
    lossy_out = lossy_out || hit->second.second;
    if (!hit->second.first && hit->second.second) {
      fail(ErrorKind::Rejected, "class subproblem is UNSAT only after a lossy shrink");
    }
    return hit->second.first;
  }
  ++ctx.depth;
  BlockInner r = block_minimality_inner(sub, ctx);
  --ctx.depth;
  const bool sat = !r.unsat;
  ctx.memo.emplace(key, std::make_pair(sat, r.lossy));
  lossy_out = lossy_out || r.lossy;
  if (!sat && r.lossy) {
    fail(ErrorKind::Rejected, "class subproblem is UNSAT only after a lossy shrink");
  }
  return sat;
}

// Least triple of the coherent class at each class variable.
std::vector<PrimeInterval> class_interval_choice(const CoherentIndex& idx, int cls,
                                                 const std::vector<int>& vars) {
  std::vector<PrimeInterval> intervals;
  intervals.reserve(vars.size());
  for (int w : vars) {
    const IntervalTriple* least = nullptr;
    for (int ti : idx.class_members[static_cast<std::size_t>(cls)]) {
      const IntervalTriple& cand = idx.triples[static_cast<std::size_t>(ti)];
      if (cand.var != w) continue;
      if (least == nullptr || interval_triple_less(cand, *least)) least = &cand;
    }
    require_internal(least != nullptr, "coherent class lists a variable with no triple");
    intervals.push_back(PrimeInterval{least->alpha, least->beta});
  }
  return intervals;
}

BlockInner block_minimality_inner(Instance cur, Ctx& ctx) {
  BlockInner res;
  res.value_of = identity_maps(cur);

  int round = 0;
  for (;;) {
    // Tighten and preprocess until both are stable.
    for (;;) {
      TightenedInstance t3 = establish_k_minimality(cur, 3);
      res.value_of = compose_maps_per_var(res.value_of, t3.value_of);
      cur = std::move(t3.instance);
      if (t3.unsat) {
        res.instance = std::move(cur);
        res.unsat = true;
        res.diagnostic = "a constraint lost all tuples during 3-minimality";
        return res;
      }
      StageResult mp = maroti_preprocess(cur);
      if (!mp.changed) break;
      res.value_of = compose_maps_per_var(res.value_of, mp.value_of);
      res.lossy = res.lossy || mp.lossy;
      cur = std::move(mp.instance);
    }

    CoherentIndex idx = coherent_sets(cur);
    std::size_t before = total_tuples(cur);

    for (int cls = 0; cls < idx.num_classes; ++cls) {
      const std::vector<int>& vars = idx.class_vars[static_cast<std::size_t>(cls)];
      Instance sub = restrict_to(cur, vars);

      // Positions of each original constraint inside the restriction, in the
      // order restrict_to kept them.
      std::vector<int> sub_index_of(cur.constraints.size(), -1);
      {
        int si = 0;
        for (std::size_t ci = 0; ci < cur.constraints.size(); ++ci) {
          bool hits = false;
          for (int v : cur.constraints[ci].scope) {
            if (std::binary_search(vars.begin(), vars.end(), v)) {
              hits = true;
              break;
            }
          }
          if (hits) sub_index_of[ci] = si++;
        }
      }

      auto restriction_of = [&](const Constraint& c, const std::vector<int>& t) {
        std::vector<int> r;
        for (std::size_t p = 0; p < c.scope.size(); ++p) {
          if (std::binary_search(vars.begin(), vars.end(), c.scope[p])) r.push_back(t[p]);
        }
        return r;
      };

      if (all_maltsev(sub)) {
        MinimalizeResult mres = minimalize_maltsev(sub);
        for (std::size_t ci = 0; ci < cur.constraints.size(); ++ci) {
          if (sub_index_of[ci] < 0) continue;
          const Constraint& pruned =
              mres.instance.constraints[static_cast<std::size_t>(sub_index_of[ci])];
          Constraint& c = cur.constraints[ci];
          std::vector<std::vector<int>> kept;
          kept.reserve(c.tuples.size());
          for (const auto& t : c.tuples) {
            if (std::binary_search(pruned.tuples.begin(), pruned.tuples.end(),
                                   restriction_of(c, t))) {
              kept.push_back(t);
            }
          }
          c.tuples = std::move(kept);
        }
      } else {
        // Dichotomy: a non-Mal'tsev coherent class must carry minimal
        // elements everywhere, then splits along its link partition.
        for (const AlgebraRef& d : sub.domains) {
          const SbmCertificate& cert = certificate_for(d);
          require_internal(cert.is_maltsev || cert.minimal_element.has_value(),
                           "preprocessed domain is neither Mal'tsev nor has a minimal element");
          require_internal(cert.minimal_element.has_value(),
                           "coherent class mixes Mal'tsev and minimal-element domains");
        }
        std::vector<PrimeInterval> intervals = class_interval_choice(idx, cls, vars);
        LinkPartition lp = link_partition(sub, intervals);

        // Class subinstances over the strictly smaller class domains.
        std::vector<Instance> parts(static_cast<std::size_t>(lp.k));
        std::vector<std::vector<std::vector<int>>> part_new_of(static_cast<std::size_t>(lp.k));
        for (int j = 0; j < lp.k; ++j) {
          Instance& pj = parts[static_cast<std::size_t>(j)];
          part_new_of[static_cast<std::size_t>(j)].resize(sub.var_names.size());
          for (std::size_t v = 0; v < sub.var_names.size(); ++v) {
            std::vector<int> elems;
            for (int x = 0; x < sub.domains[v]->size(); ++x) {
              if (lp.class_of[v][static_cast<std::size_t>(x)] == j) elems.push_back(x);
            }
            require_internal(!elems.empty() &&
                                 static_cast<int>(elems.size()) < sub.domains[v]->size(),
                             "link partition class is not a proper nonempty restriction");
            auto& new_of = part_new_of[static_cast<std::size_t>(j)][v];
            new_of.assign(static_cast<std::size_t>(sub.domains[v]->size()), -1);
            for (std::size_t i = 0; i < elems.size(); ++i) {
              new_of[static_cast<std::size_t>(elems[i])] = static_cast<int>(i);
            }
            pj.var_names.push_back(sub.var_names[v]);
            pj.domains.push_back(
                sub_algebra(*sub.domains[v], elems, sub.domains[v]->name() + "/l"));
          }
          for (const Constraint& c : sub.constraints) {
            Constraint cc;
            cc.scope = c.scope;
            for (const auto& t : c.tuples) {
              std::vector<int> u(t.size());
              bool in_class = true;
              for (std::size_t p = 0; p < t.size() && in_class; ++p) {
                int mapped = part_new_of[static_cast<std::size_t>(j)]
                                        [static_cast<std::size_t>(c.scope[p])]
                                        [static_cast<std::size_t>(t[p])];
                if (mapped < 0) {
                  in_class = false;
                } else {
                  u[p] = mapped;
                }
              }
              if (in_class) cc.tuples.push_back(std::move(u));
            }
            std::sort(cc.tuples.begin(), cc.tuples.end());
            cc.tuples.erase(std::unique(cc.tuples.begin(), cc.tuples.end()), cc.tuples.end());
            pj.constraints.push_back(std::move(cc));
          }
        }

        // A tuple survives when its class subinstance, pinned to the tuple's
        // restriction, has a solution.
        for (std::size_t ci = 0; ci < cur.constraints.size(); ++ci) {
          if (sub_index_of[ci] < 0) continue;
          Constraint& c = cur.constraints[ci];
          std::vector<int> scope_vars;  // sub variable index per kept position
          for (std::size_t p = 0; p < c.scope.size(); ++p) {
            auto it = std::lower_bound(vars.begin(), vars.end(), c.scope[p]);
            if (it != vars.end() && *it == c.scope[p]) {
              scope_vars.push_back(static_cast<int>(it - vars.begin()));
            }
          }
          std::vector<std::vector<int>> kept;
          kept.reserve(c.tuples.size());
          for (const auto& t : c.tuples) {
            std::vector<int> r = restriction_of(c, t);
            int j = lp.class_of[static_cast<std::size_t>(scope_vars[0])]
                               [static_cast<std::size_t>(r[0])];
            bool consistent = true;
            for (std::size_t p = 1; p < r.size(); ++p) {
              if (lp.class_of[static_cast<std::size_t>(scope_vars[p])]
                             [static_cast<std::size_t>(r[p])] != j) {
                consistent = false;
                break;
              }
            }
            require_internal(consistent, "constraint tuple crosses link-partition classes");
            Instance pinned = parts[static_cast<std::size_t>(j)];
            for (std::size_t p = 0; p < r.size(); ++p) {
              int mapped = part_new_of[static_cast<std::size_t>(j)]
                                      [static_cast<std::size_t>(scope_vars[p])]
                                      [static_cast<std::size_t>(r[p])];
              require_internal(mapped >= 0, "class tuple uses an element outside its class");
              pinned.constraints.push_back(Constraint{{scope_vars[p]}, {{mapped}}});
            }
            if (class_sat(pinned, ctx, res.lossy)) kept.push_back(t);
          }
          c.tuples = std::move(kept);
        }
      }
    }

    std::size_t after = total_tuples(cur);
    if (ctx.trace != nullptr) {
      nlohmann::json line;
      line["round"] = round;
      line["depth"] = ctx.depth;
      nlohmann::json sets = nlohmann::json::array();
      for (const auto& w : idx.class_vars) sets.push_back(w);
      line["coherent_sets"] = std::move(sets);
      line["deletions"] = before - after;
      (*ctx.trace) << line.dump() << '\n';
    }
    ++round;

    for (const Constraint& c : cur.constraints) {
      if (c.tuples.empty()) {
        res.instance = std::move(cur);
        res.unsat = true;
        res.diagnostic = "a constraint lost all tuples during block minimality";
        return res;
      }
    }
    if (after == before) break;
  }

  res.instance = std::move(cur);
  return res;
}

}  // namespace

StageResult maroti_preprocess(const Instance& inst) {
  StageResult res;
  res.instance = inst;
  res.value_of = identity_maps(inst);
  Instance& cur = res.instance;

  for (;;) {
    bool progressed = false;
    for (std::size_t v = 0; v < cur.var_names.size(); ++v) {
      const AlgebraRef& dom = cur.domains[v];
      const SbmCertificate& cert = certificate_for(dom);
      if (cert.is_maltsev || cert.minimal_element.has_value()) continue;

      // Elements whose right translation is onto.
      const int n = dom->size();
      std::vector<int> surjective;
      for (int a = 0; a < n; ++a) {
        std::vector<bool> hit(static_cast<std::size_t>(n), false);
        for (int x = 0; x < n; ++x) hit[static_cast<std::size_t>(dom->dot(x, a))] = true;
        if (std::find(hit.begin(), hit.end(), false) == hit.end()) surjective.push_back(a);
      }
      if (surjective.empty()) {
        fail(ErrorKind::Rejected,
             "domain " + dom->name() + " has no surjective translation to shrink by");
      }
      std::vector<int> gen = generate_subalgebra(*dom, surjective);
      if (static_cast<int>(gen.size()) == n) {
        fail(ErrorKind::Rejected,
             "domain " + dom->name() + " is not shrunk by its surjective translations");
      }

      std::vector<int> new_of(static_cast<std::size_t>(n), -1);
      for (std::size_t i = 0; i < gen.size(); ++i) {
        new_of[static_cast<std::size_t>(gen[i])] = static_cast<int>(i);
      }
      cur.domains[v] = sub_algebra(*dom, gen, dom->name() + "/c");
      std::vector<int> composed;
      composed.reserve(gen.size());
      for (int g : gen) composed.push_back(res.value_of[v][static_cast<std::size_t>(g)]);
      res.value_of[v] = std::move(composed);

      for (Constraint& c : cur.constraints) {
        std::vector<std::vector<int>> kept;
        kept.reserve(c.tuples.size());
        for (auto t : c.tuples) {
          bool ok = true;
          for (std::size_t p = 0; p < c.scope.size() && ok; ++p) {
            if (static_cast<std::size_t>(c.scope[p]) != v) continue;
            int mapped = new_of[static_cast<std::size_t>(t[p])];
            if (mapped < 0) {
              ok = false;
            } else {
              t[p] = mapped;
            }
          }
          if (ok) kept.push_back(std::move(t));
        }
        std::sort(kept.begin(), kept.end());
        kept.erase(std::unique(kept.begin(), kept.end()), kept.end());
        c.tuples = std::move(kept);
      }
      res.changed = true;
      res.lossy = true;
      progressed = true;
      res.diagnostic += "shrunk " + dom->name() + " to its surjective-translation subalgebra; ";
    }
    if (!progressed) break;
  }
  return res;
}

CoherentIndex coherent_sets(const Instance& inst) {
  CoherentIndex idx;
  for (int v = 0; v < inst.num_vars(); ++v) {
    const AlgebraRef& dom = inst.domains[static_cast<std::size_t>(v)];
    const SbmCertificate& cert = certificate_for(dom);
    for (const PrimeInterval& pi : prime_intervals_below(*dom, cert.theta)) {
      idx.triples.push_back(IntervalTriple{v, pi.alpha, pi.beta});
    }
  }
  const int t = static_cast<int>(idx.triples.size());

  std::map<std::pair<int, int>, Relation> pair_cache;
  auto pair_rel = [&](int v, int w) -> const Relation& {
    auto key = std::make_pair(v, w);
    auto it = pair_cache.find(key);
    if (it == pair_cache.end()) {
      it = pair_cache.emplace(key, pairwise_solutions(inst, v, w)).first;
    }
    return it->second;
  };

  std::vector<std::vector<bool>> nonsep(static_cast<std::size_t>(t),
                                        std::vector<bool>(static_cast<std::size_t>(t), false));
  for (int i = 0; i < t; ++i) {
    for (int j = 0; j < t; ++j) {
      const IntervalTriple& ti = idx.triples[static_cast<std::size_t>(i)];
      const IntervalTriple& tj = idx.triples[static_cast<std::size_t>(j)];
      const Relation& rel = pair_rel(ti.var, tj.var);
      nonsep[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          !can_separate(rel, ti, tj).has_value();
    }
  }
  for (int i = 0; i < t; ++i) {
    require_internal(nonsep[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)],
                     "a triple separates from itself");
    for (int j = 0; j < t; ++j) {
      require_internal(nonsep[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] ==
                           nonsep[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)],
                       "non-separability is not symmetric");
      for (int k = 0; k < t; ++k) {
        if (nonsep[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] &&
            nonsep[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)]) {
          require_internal(nonsep[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)],
                           "non-separability is not transitive");
        }
      }
    }
  }

  idx.class_of.assign(static_cast<std::size_t>(t), -1);
  for (int i = 0; i < t; ++i) {
    if (idx.class_of[static_cast<std::size_t>(i)] != -1) continue;
    const int cls = idx.num_classes++;
    for (int j = i; j < t; ++j) {
      if (nonsep[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) {
        idx.class_of[static_cast<std::size_t>(j)] = cls;
      }
    }
  }
  idx.class_members.resize(static_cast<std::size_t>(idx.num_classes));
  idx.class_vars.resize(static_cast<std::size_t>(idx.num_classes));
  for (int i = 0; i < t; ++i) {
    const int cls = idx.class_of[static_cast<std::size_t>(i)];
    idx.class_members[static_cast<std::size_t>(cls)].push_back(i);
    idx.class_vars[static_cast<std::size_t>(cls)].push_back(
        idx.triples[static_cast<std::size_t>(i)].var);
  }
  for (auto& w : idx.class_vars) {
    std::sort(w.begin(), w.end());
    w.erase(std::unique(w.begin(), w.end()), w.end());
  }
  return idx;
}

LinkPartition link_partition(const Instance& sub, const std::vector<PrimeInterval>& intervals) {
  const int n = sub.num_vars();
  if (static_cast<int>(intervals.size()) != n) {
    fail(ErrorKind::BadIndex, "one prime interval required per variable");
  }
  LinkPartition lp;
  lp.k = 2;
  lp.class_of.resize(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) {
    const AlgebraRef& dom = sub.domains[static_cast<std::size_t>(v)];
    const SbmCertificate& cert = certificate_for(dom);
    if (!cert.minimal_element.has_value()) {
      fail(ErrorKind::PreconditionViolated, "link partition needs minimal elements everywhere");
    }
    std::vector<int> split =
        split_elements(*dom, intervals[static_cast<std::size_t>(v)].alpha,
                       intervals[static_cast<std::size_t>(v)].beta);
    require_internal(!split.empty(), "minimal element is never split");
    require_internal(static_cast<int>(split.size()) < dom->size(),
                     "max-block elements are never split");
    for (int m : cert.max_block) {
      require_internal(!std::binary_search(split.begin(), split.end(), m),
                       "a max-block element turned out split");
    }
    auto& cls = lp.class_of[static_cast<std::size_t>(v)];
    cls.assign(static_cast<std::size_t>(dom->size()), 1);
    for (int s : split) cls[static_cast<std::size_t>(s)] = 0;

    // Both classes are subalgebras and the partition is a congruence.
    std::vector<std::vector<int>> blocks(2);
    for (int x = 0; x < dom->size(); ++x) {
      blocks[static_cast<std::size_t>(cls[static_cast<std::size_t>(x)])].push_back(x);
    }
    Congruence part = partition_from_blocks(dom->size(), blocks);
    require_internal(is_congruence(*dom, part), "split partition is not a congruence");
  }

  for (int v = 0; v < n; ++v) {
    for (int w = v + 1; w < n; ++w) {
      Relation svw = pairwise_solutions(sub, v, w);
      if (!alignment_check(svw, intervals[static_cast<std::size_t>(v)],
                           intervals[static_cast<std::size_t>(w)])) {
        fail(ErrorKind::NotAligned, "pairwise solutions mix split and non-split elements");
      }
    }
  }

  // Every constraint tuple stays inside one class index across its scope.
  for (const Constraint& c : sub.constraints) {
    for (const auto& t : c.tuples) {
      for (std::size_t p = 1; p < t.size(); ++p) {
        require_internal(
            lp.class_of[static_cast<std::size_t>(c.scope[p])][static_cast<std::size_t>(t[p])] ==
                lp.class_of[static_cast<std::size_t>(c.scope[0])][static_cast<std::size_t>(t[0])],
            "constraint tuple crosses link-partition classes");
      }
    }
  }
  return lp;
}

BlockMinimalResult block_minimality(const Instance& inst) {
  Ctx ctx;
  BlockInner inner = block_minimality_inner(inst, ctx);
  BlockMinimalResult res;
  res.instance = std::move(inner.instance);
  res.value_of = std::move(inner.value_of);
  res.unsat = inner.unsat;
  res.lossy = inner.lossy;
  res.diagnostic = std::move(inner.diagnostic);
  return res;
}

Instance normalize_instance(const Instance& inst) {
  Instance out = inst;
  std::map<std::string, AlgebraRef> cache;
  for (AlgebraRef& dom : out.domains) {
    const std::string sig = dom->table_signature();
    auto it = cache.find(sig);
    if (it == cache.end()) it = cache.emplace(sig, normalize_algebra(*dom)).first;
    dom = it->second;
  }
  return out;
}

SolveOutcome solve(const Instance& inst, const SolveOptions& opts) {
  validate_instance(inst);
  Instance norm = normalize_instance(inst);

  Ctx ctx;
  ctx.trace = opts.trace;

  SolveOutcome out;
  BlockInner base;
  try {
    base = block_minimality_inner(norm, ctx);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Rejected) {
      out.status = SolveStatus::Rejected;
      out.diagnostic = e.what();
      return out;
    }
    throw;
  }
  if (base.unsat) {
    if (base.lossy) {
      out.status = SolveStatus::Rejected;
      out.diagnostic = "UNSAT reached only after a lossy preprocessing shrink";
    } else {
      out.status = SolveStatus::Unsat;
      out.diagnostic = base.diagnostic;
    }
    return out;
  }

  // Extraction: pin variables in input order to the least value that keeps
  // the pipeline nonempty.
  Instance pinned = norm;
  bool saw_reject = false;
  for (int v = 0; v < norm.num_vars(); ++v) {
    bool found = false;
    for (int a = 0; a < norm.domains[static_cast<std::size_t>(v)]->size() && !found; ++a) {
      Instance cand = pin_constant(pinned, v, a);
      try {
        BlockInner r = block_minimality_inner(cand, ctx);
        if (!r.unsat) {
          pinned = std::move(cand);
          found = true;
        }
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::Rejected) throw;
        saw_reject = true;
      }
    }
    if (!found) {
      if (saw_reject) {
        out.status = SolveStatus::Rejected;
        out.diagnostic = "extraction blocked by a lossy shrink";
        return out;
      }
      fail(ErrorKind::InternalInvariantViolated,
           "nonempty block-minimal instance has no extendable value");
    }
  }

  std::vector<int> assignment(static_cast<std::size_t>(norm.num_vars()));
  for (std::size_t c = inst.constraints.size(); c < pinned.constraints.size(); ++c) {
    const Constraint& pin = pinned.constraints[c];
    require_internal(pin.scope.size() == 1 && pin.tuples.size() == 1, "extraction pin malformed");
    assignment[static_cast<std::size_t>(pin.scope[0])] = pin.tuples[0][0];
  }
  require_internal(satisfies(inst, assignment), "extracted assignment fails a constraint");
  out.status = SolveStatus::Sat;
  out.assignment = assignment;
  return out;
}

}  // namespace sbm
