#include "sbm/polynomial.hpp"

#include <algorithm>
#include <array>
#include <cstring>
#include <map>
#include <memory>
#include <unordered_map>

#include "sbm/error.hpp"

namespace sbm {

MapTable compose_maps(const MapTable& f, const MapTable& g) {
  MapTable out(g.size());
  for (std::size_t x = 0; x < g.size(); ++x) out[x] = f[g[x]];
  return out;
}

bool is_idempotent_map(const MapTable& f) {
  for (std::size_t x = 0; x < f.size(); ++x)
    if (f[static_cast<std::size_t>(f[x])] != f[x]) return false;
  return true;
}

MapTable idempotent_power(const MapTable& f) {
  MapTable cur = f;
  for (int k = 1; k <= 4096; ++k) {
    if (is_idempotent_map(cur)) return cur;
    cur = compose_maps(cur, f);
  }
  fail(ErrorKind::InternalInvariantViolated, "no idempotent power within bound");
}

// --- PolyArena ---------------------------------------------------------------

PolyArena::PolyArena(std::vector<AlgebraRef> coords, std::vector<int> scope,
                     std::vector<std::vector<int>> constants, std::size_t budget)
    : coords_(std::move(coords)), scope_(std::move(scope)), constants_(std::move(constants)) {
  require_internal(coords_.size() == scope_.size(), "arena scope and coords disagree");
  offsets_.resize(coords_.size());
  for (std::size_t c = 0; c < coords_.size(); ++c) {
    offsets_[c] = total_len_;
    total_len_ += coords_[c]->size();
    require_internal(coords_[c]->size() <= 255, "arena coordinate domain too large to pack");
  }
  close(budget);
}

std::string PolyArena::pack_of_maps(const std::vector<MapTable>& maps) const {
  std::string pack(static_cast<std::size_t>(total_len_), '\0');
  for (std::size_t c = 0; c < coords_.size(); ++c)
    for (int x = 0; x < coords_[c]->size(); ++x)
      pack[offsets_[c] + x] = static_cast<char>(maps[c][x]);
  return pack;
}

std::vector<MapTable> PolyArena::maps(std::size_t idx) const {
  std::vector<MapTable> out(coords_.size());
  for (std::size_t c = 0; c < coords_.size(); ++c) {
    out[c].resize(coords_[c]->size());
    for (int x = 0; x < coords_[c]->size(); ++x) out[c][x] = map_entry(idx, c, x);
  }
  return out;
}

int PolyArena::find_maps(const std::vector<MapTable>& maps) const {
  const auto it = index_.find(pack_of_maps(maps));
  return it == index_.end() ? -1 : it->second;
}

PolyArena::FastKey PolyArena::fast_key(const std::string& pack) const {
  std::uint64_t words[2] = {0, 0};
  std::memcpy(words, pack.data(), pack.size());
  return {words[0], words[1]};
}

namespace {
std::uint64_t mix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}
}  // namespace

void PolyArena::fast_grow() {
  std::vector<std::pair<FastKey, int>> old;
  old.swap(fast_slots_);
  fast_slots_.assign(old.size() * 2, {{0, 0}, -1});
  const std::size_t mask = fast_slots_.size() - 1;
  for (const auto& slot : old) {
    if (slot.second < 0) continue;
    std::size_t h = mix(slot.first.first ^ mix(slot.first.second)) & mask;
    while (fast_slots_[h].second >= 0) h = (h + 1) & mask;
    fast_slots_[h] = slot;
  }
}

int PolyArena::insert(const std::string& pack, Prov prov, std::size_t budget) {
  if (fast_) {
    const FastKey key = fast_key(pack);
    const std::size_t mask = fast_slots_.size() - 1;
    std::size_t h = mix(key.first ^ mix(key.second)) & mask;
    while (fast_slots_[h].second >= 0) {
      if (fast_slots_[h].first == key) return -1;
      h = (h + 1) & mask;
    }
    if (packs_.size() >= budget)
      fail(ErrorKind::ClosureBudgetExceeded, "polynomial closure exceeded its element budget");
    const int idx = static_cast<int>(packs_.size());
    fast_slots_[h] = {key, idx};
    packs_.push_back(pack);
    provs_.push_back(prov);
    if (++fast_count_ * 10 >= fast_slots_.size() * 7) fast_grow();
    return idx;
  }
  auto [it, fresh] = index_.emplace(pack, static_cast<int>(packs_.size()));
  if (!fresh) return -1;
  if (packs_.size() >= budget)
    fail(ErrorKind::ClosureBudgetExceeded, "polynomial closure exceeded its element budget");
  packs_.push_back(pack);
  provs_.push_back(prov);
  return it->second;
}

void PolyArena::close(std::size_t budget) {
  fast_ = total_len_ <= 16;
  if (fast_) fast_slots_.assign(1024, {{0, 0}, -1});

  // Generators: the identity, then one constant map tuple per constant.
  {
    std::string id_pack(static_cast<std::size_t>(total_len_), '\0');
    for (std::size_t c = 0; c < coords_.size(); ++c)
      for (int x = 0; x < coords_[c]->size(); ++x)
        id_pack[offsets_[c] + x] = static_cast<char>(x);
    identity_index_ = insert(id_pack, Prov{0, 0, 0, 0}, budget);
    require_internal(identity_index_ == 0, "identity must be the first arena element");
  }
  for (std::size_t k = 0; k < constants_.size(); ++k) {
    require_internal(constants_[k].size() == coords_.size(), "constant tuple arity mismatch");
    std::string pack(static_cast<std::size_t>(total_len_), '\0');
    for (std::size_t c = 0; c < coords_.size(); ++c)
      for (int x = 0; x < coords_[c]->size(); ++x)
        pack[offsets_[c] + x] = static_cast<char>(constants_[k][c]);
    insert(pack, Prov{1, static_cast<int>(k), 0, 0}, budget);
  }

  const std::size_t ncoords = coords_.size();
  std::vector<const int*> dot_tables(ncoords), m_tables(ncoords);
  std::vector<int> sizes(ncoords);
  for (std::size_t c = 0; c < ncoords; ++c) {
    dot_tables[c] = coords_[c]->dot_table().data();
    m_tables[c] = coords_[c]->m_table().data();
    sizes[c] = coords_[c]->size();
  }
  auto apply_dot = [&](const std::string& f, const std::string& g, std::string& out) {
    for (std::size_t c = 0; c < ncoords; ++c) {
      const int n = sizes[c];
      const int off = offsets_[c];
      for (int x = 0; x < n; ++x)
        out[off + x] = static_cast<char>(
            dot_tables[c][static_cast<unsigned char>(f[off + x]) * n +
                          static_cast<unsigned char>(g[off + x])]);
    }
  };
  auto apply_m = [&](const std::string& f, const std::string& g, const std::string& h,
                     std::string& out) {
    for (std::size_t c = 0; c < ncoords; ++c) {
      const int n = sizes[c];
      const int off = offsets_[c];
      for (int x = 0; x < n; ++x)
        out[off + x] = static_cast<char>(
            m_tables[c][(static_cast<unsigned char>(f[off + x]) * n +
                         static_cast<unsigned char>(g[off + x])) *
                            n +
                        static_cast<unsigned char>(h[off + x])]);
    }
  };

  // Worklist closure: when element q arrives, evaluate every combination whose
  // largest argument index is q. Each combination is evaluated exactly once.
  std::string buf(static_cast<std::size_t>(total_len_), '\0');
  for (std::size_t q = 0; q < packs_.size(); ++q) {
    for (std::size_t j = 0; j <= q; ++j) {
      apply_dot(packs_[q], packs_[j], buf);
      insert(buf, Prov{2, static_cast<int>(q), static_cast<int>(j), 0}, budget);
      if (j < q) {
        apply_dot(packs_[j], packs_[q], buf);
        insert(buf, Prov{2, static_cast<int>(j), static_cast<int>(q), 0}, budget);
      }
    }
    const int qi = static_cast<int>(q);
    for (int x = 0; x <= qi; ++x)
      for (int y = 0; y <= qi; ++y) {
        apply_m(packs_[x], packs_[y], packs_[q], buf);
        insert(buf, Prov{3, x, y, qi}, budget);
      }
    for (int x = 0; x <= qi; ++x)
      for (int z = 0; z < qi; ++z) {
        apply_m(packs_[x], packs_[q], packs_[z], buf);
        insert(buf, Prov{3, x, qi, z}, budget);
      }
    for (int y = 0; y < qi; ++y)
      for (int z = 0; z < qi; ++z) {
        apply_m(packs_[q], packs_[y], packs_[z], buf);
        insert(buf, Prov{3, qi, y, z}, budget);
      }
  }

  // find_maps works off the string index either way; the packed table only
  // serves the closure loop.
  if (fast_) {
    for (std::size_t i = 0; i < packs_.size(); ++i)
      index_.emplace(packs_[i], static_cast<int>(i));
    fast_slots_.clear();
    fast_slots_.shrink_to_fit();
  }
}

PolyArena PolyArena::rescoped(std::vector<int> scope) const {
  require_internal(scope.size() == coords_.size(), "rescope arity must match the coordinates");
  PolyArena out(*this);
  out.scope_ = std::move(scope);
  return out;
}

PolynomialWitness PolyArena::witness(std::size_t idx) const {
  PolynomialWitness w;
  w.scope = scope_;
  w.components = maps(idx);

  // Topological walk of the provenance DAG rooted at idx.
  std::vector<int> order;
  std::vector<char> seen(packs_.size(), 0);
  std::vector<int> stack = {static_cast<int>(idx)};
  while (!stack.empty()) {
    const int cur = stack.back();
    if (seen[cur] == 2) {
      stack.pop_back();
      continue;
    }
    if (seen[cur] == 1) {
      seen[cur] = 2;
      order.push_back(cur);
      stack.pop_back();
      continue;
    }
    seen[cur] = 1;
    const Prov& p = provs_[cur];
    if (p.op == 2) {
      stack.push_back(p.a);
      stack.push_back(p.b);
    } else if (p.op == 3) {
      stack.push_back(p.a);
      stack.push_back(p.b);
      stack.push_back(p.c);
    }
  }

  std::unordered_map<int, int> ref_of;        // arena index -> witness ref
  std::unordered_map<int, int> const_ref_of;  // arena constant index -> witness constant
  for (int cur : order) {
    const Prov& p = provs_[cur];
    if (p.op == 0) {
      ref_of[cur] = -1;
    } else if (p.op == 1) {
      auto it = const_ref_of.find(p.a);
      if (it == const_ref_of.end()) {
        it = const_ref_of.emplace(p.a, static_cast<int>(w.constants.size())).first;
        w.constants.push_back(constants_[p.a]);
      }
      ref_of[cur] = -(it->second + 2);
    } else {
      SlpStep step;
      step.op = p.op == 2 ? SlpStep::Op::Dot : SlpStep::Op::M;
      step.a = ref_of.at(p.a);
      step.b = ref_of.at(p.b);
      step.c = p.op == 3 ? ref_of.at(p.c) : 0;
      ref_of[cur] = static_cast<int>(w.trace.size());
      w.trace.push_back(step);
    }
  }
  w.root = ref_of.at(static_cast<int>(idx));
  return w;
}

// --- witness helpers ---------------------------------------------------------

namespace {

std::vector<MapTable> identity_maps(const std::vector<AlgebraRef>& coords) {
  std::vector<MapTable> maps(coords.size());
  for (std::size_t c = 0; c < coords.size(); ++c) {
    maps[c].resize(coords[c]->size());
    for (int x = 0; x < coords[c]->size(); ++x) maps[c][x] = x;
  }
  return maps;
}

std::vector<MapTable> constant_maps(const std::vector<AlgebraRef>& coords,
                                    const std::vector<int>& tuple) {
  std::vector<MapTable> maps(coords.size());
  for (std::size_t c = 0; c < coords.size(); ++c)
    maps[c].assign(coords[c]->size(), tuple[c]);
  return maps;
}

// Merges witness steps into (constants, trace) with structural deduplication,
// so that repeated substructure is emitted once.
class WitnessBuilder {
 public:
  explicit WitnessBuilder(const std::vector<AlgebraRef>& coords) : coords_(coords) {}

  int add_constant(const std::vector<int>& tuple) {
    auto it = const_index_.find(tuple);
    if (it != const_index_.end()) return it->second;
    const int idx = static_cast<int>(constants_.size());
    constants_.push_back(tuple);
    const_index_.emplace(tuple, idx);
    return idx;
  }

  // Returns the ref of w.root inside the merged trace.
  int merge(const PolynomialWitness& w) {
    std::vector<int> const_map(w.constants.size());
    for (std::size_t k = 0; k < w.constants.size(); ++k)
      const_map[k] = add_constant(w.constants[k]);
    std::vector<int> step_map(w.trace.size());
    auto remap = [&](int ref, std::size_t upto) {
      if (ref == -1) return -1;
      if (ref <= -2) return -(const_map[-ref - 2] + 2);
      require_internal(static_cast<std::size_t>(ref) < upto, "witness trace reference order");
      return step_map[ref];
    };
    for (std::size_t i = 0; i < w.trace.size(); ++i) {
      const SlpStep& s = w.trace[i];
      step_map[i] = add_step(s.op, remap(s.a, i), remap(s.b, i),
                             s.op == SlpStep::Op::M ? remap(s.c, i) : 0);
    }
    return remap(w.root, w.trace.size());
  }

  int add_step(SlpStep::Op op, int a, int b, int c) {
    const std::array<int, 4> key{static_cast<int>(op), a, b, c};
    auto it = step_index_.find(key);
    if (it != step_index_.end()) return it->second;
    const int idx = static_cast<int>(trace_.size());
    trace_.push_back(SlpStep{op, a, b, c});
    step_index_.emplace(key, idx);
    return idx;
  }

  PolynomialWitness finish(const std::vector<int>& scope, int root,
                           std::vector<MapTable> components) {
    PolynomialWitness w;
    w.scope = scope;
    w.components = std::move(components);
    w.constants = std::move(constants_);
    w.trace = std::move(trace_);
    w.root = root;
    return w;
  }

 private:
  const std::vector<AlgebraRef>& coords_;
  std::vector<std::vector<int>> constants_;
  std::map<std::vector<int>, int> const_index_;
  std::vector<SlpStep> trace_;
  std::map<std::array<int, 4>, int> step_index_;
};

std::vector<MapTable> pointwise_dot_maps(const std::vector<AlgebraRef>& coords,
                                         const std::vector<MapTable>& f,
                                         const std::vector<MapTable>& g) {
  std::vector<MapTable> out(coords.size());
  for (std::size_t c = 0; c < coords.size(); ++c) {
    out[c].resize(coords[c]->size());
    for (int x = 0; x < coords[c]->size(); ++x) out[c][x] = coords[c]->dot(f[c][x], g[c][x]);
  }
  return out;
}

std::vector<MapTable> pointwise_m_maps(const std::vector<AlgebraRef>& coords,
                                       const std::vector<MapTable>& f,
                                       const std::vector<MapTable>& g,
                                       const std::vector<MapTable>& h) {
  std::vector<MapTable> out(coords.size());
  for (std::size_t c = 0; c < coords.size(); ++c) {
    out[c].resize(coords[c]->size());
    for (int x = 0; x < coords[c]->size(); ++x)
      out[c][x] = coords[c]->m(f[c][x], g[c][x], h[c][x]);
  }
  return out;
}

std::vector<MapTable> composed_maps(const std::vector<MapTable>& f,
                                    const std::vector<MapTable>& g) {
  std::vector<MapTable> out(f.size());
  for (std::size_t c = 0; c < f.size(); ++c) out[c] = compose_maps(f[c], g[c]);
  return out;
}

}  // namespace

PolynomialWitness identity_witness(const std::vector<AlgebraRef>& coords,
                                   const std::vector<int>& scope) {
  PolynomialWitness w;
  w.scope = scope;
  w.components = identity_maps(coords);
  w.root = -1;
  return w;
}

PolynomialWitness constant_witness(const std::vector<AlgebraRef>& coords,
                                   const std::vector<int>& scope,
                                   const std::vector<int>& tuple) {
  PolynomialWitness w;
  w.scope = scope;
  w.components = constant_maps(coords, tuple);
  w.constants.push_back(tuple);
  w.root = -2;
  return w;
}

PolynomialWitness compose_witnesses(const std::vector<AlgebraRef>& coords,
                                    const PolynomialWitness& f, const PolynomialWitness& g) {
  require_internal(f.scope == g.scope, "compose_witnesses scope mismatch");
  if (f.root == -1) return g;
  if (g.root == -1) return f;
  if (f.root <= -2 && f.trace.empty()) return f;  // constant absorbs composition
  WitnessBuilder b(coords);
  const int gr = b.merge(g);
  const int fr = b.merge(f);
  const int root = b.add_step(SlpStep::Op::Compose, fr, gr, 0);
  return b.finish(f.scope, root, composed_maps(f.components, g.components));
}

PolynomialWitness pointwise_dot_witness(const std::vector<AlgebraRef>& coords,
                                        const PolynomialWitness& f, const PolynomialWitness& g) {
  require_internal(f.scope == g.scope, "pointwise_dot_witness scope mismatch");
  WitnessBuilder b(coords);
  const int fr = b.merge(f);
  const int gr = b.merge(g);
  const int root = b.add_step(SlpStep::Op::Dot, fr, gr, 0);
  return b.finish(f.scope, root, pointwise_dot_maps(coords, f.components, g.components));
}

PolynomialWitness pointwise_m_witness(const std::vector<AlgebraRef>& coords,
                                      const PolynomialWitness& f, const PolynomialWitness& g,
                                      const PolynomialWitness& h) {
  require_internal(f.scope == g.scope && g.scope == h.scope, "pointwise_m_witness scope mismatch");
  WitnessBuilder b(coords);
  const int fr = b.merge(f);
  const int gr = b.merge(g);
  const int hr = b.merge(h);
  const int root = b.add_step(SlpStep::Op::M, fr, gr, hr);
  return b.finish(f.scope, root,
                  pointwise_m_maps(coords, f.components, g.components, h.components));
}

PolynomialWitness idempotent_power_witness(const std::vector<AlgebraRef>& coords,
                                           const PolynomialWitness& f) {
  auto idempotent = [](const std::vector<MapTable>& maps) {
    for (const auto& t : maps)
      if (!is_idempotent_map(t)) return false;
    return true;
  };
  std::vector<MapTable> cur = f.components;
  int k = 1;
  while (!idempotent(cur)) {
    cur = composed_maps(cur, f.components);
    ++k;
    require_internal(k <= 4096, "no idempotent witness power within bound");
  }
  if (k == 1) return f;
  // Square-and-multiply keeps the shared trace small.
  PolynomialWitness result;
  bool have_result = false;
  PolynomialWitness power = f;
  int rem = k;
  while (rem > 0) {
    if (rem & 1) {
      result = have_result ? compose_witnesses(coords, result, power) : power;
      have_result = true;
    }
    rem >>= 1;
    if (rem > 0) power = compose_witnesses(coords, power, power);
  }
  require_internal(result.components == cur, "idempotent power components mismatch");
  return result;
}

std::vector<MapTable> evaluate_witness(const std::vector<AlgebraRef>& coords,
                                       const PolynomialWitness& w) {
  std::vector<std::vector<MapTable>> values(w.trace.size());
  auto value_of = [&](int ref) -> std::vector<MapTable> {
    if (ref == -1) return identity_maps(coords);
    if (ref <= -2) return constant_maps(coords, w.constants[-ref - 2]);
    return values[ref];
  };
  for (std::size_t i = 0; i < w.trace.size(); ++i) {
    const SlpStep& s = w.trace[i];
    switch (s.op) {
      case SlpStep::Op::Dot:
        values[i] = pointwise_dot_maps(coords, value_of(s.a), value_of(s.b));
        break;
      case SlpStep::Op::M:
        values[i] = pointwise_m_maps(coords, value_of(s.a), value_of(s.b), value_of(s.c));
        break;
      case SlpStep::Op::Compose:
        values[i] = composed_maps(value_of(s.a), value_of(s.b));
        break;
    }
  }
  return value_of(w.root);
}

PolynomialWitness replay_witness(const PolynomialWitness& w,
                                 const std::vector<AlgebraRef>& host_coords,
                                 const std::vector<int>& host_scope,
                                 const std::vector<std::vector<int>>& host_tuples,
                                 const std::vector<int>& positions) {
  require_internal(positions.size() == w.scope.size(), "replay positions arity mismatch");
  PolynomialWitness out;
  out.scope = host_scope;
  out.trace = w.trace;
  out.root = w.root;
  out.constants.reserve(w.constants.size());
  for (const auto& c : w.constants) {
    const std::vector<int>* best = nullptr;
    for (const auto& t : host_tuples) {
      bool match = true;
      for (std::size_t j = 0; j < positions.size() && match; ++j)
        match = t[positions[j]] == c[j];
      if (match) {
        best = &t;  // host tuples are kept lexicographically sorted
        break;
      }
    }
    if (best == nullptr)
      fail(ErrorKind::PreconditionViolated,
           "replay host relation has no tuple over a recorded constant");
    out.constants.push_back(*best);
  }
  out.components = evaluate_witness(host_coords, out);
  // Componentwise operations act per coordinate, so the shared coordinates
  // must reproduce the original maps exactly.
  for (std::size_t j = 0; j < positions.size(); ++j)
    require_internal(out.components[positions[j]] == w.components[j],
                     "replayed witness disagrees on a shared coordinate");
  return out;
}

// --- monoids -----------------------------------------------------------------

const PolyArena& unary_arena(const AlgebraRef& alg) {
  static thread_local std::unordered_map<std::string, std::unique_ptr<PolyArena>> cache;
  const std::string key = alg->table_signature();
  auto it = cache.find(key);
  if (it == cache.end()) {
    std::vector<std::vector<int>> constants;
    for (int v = 0; v < alg->size(); ++v) constants.push_back({v});
    auto arena = std::make_unique<PolyArena>(std::vector<AlgebraRef>{alg}, std::vector<int>{0},
                                             std::move(constants));
    it = cache.emplace(key, std::move(arena)).first;
  }
  return *it->second;
}

std::vector<MapTable> unary_polynomial_monoid(const FiniteAlgebra& alg) {
  auto copy = std::make_shared<FiniteAlgebra>(alg);
  const PolyArena& arena = unary_arena(copy);
  std::vector<MapTable> out;
  out.reserve(arena.size());
  for (std::size_t i = 0; i < arena.size(); ++i) out.push_back(arena.maps(i)[0]);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace sbm
