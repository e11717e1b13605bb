#include "sbm/minimal_sets.hpp"

#include <algorithm>
#include <set>

#include "sbm/error.hpp"

namespace sbm {

bool separates_interval(const MapTable& f, const Congruence& alpha, const Congruence& beta) {
  const int n = static_cast<int>(f.size());
  for (int x = 0; x < n; ++x)
    for (int y = x + 1; y < n; ++y)
      if (beta.related(x, y) && !alpha.related(f[x], f[y])) return true;
  return false;
}

std::vector<int> image_of_map(const MapTable& f) {
  std::set<int> img(f.begin(), f.end());
  return {img.begin(), img.end()};
}

std::vector<int> image_of_set(const MapTable& f, const std::vector<int>& set) {
  std::set<int> img;
  for (int v : set) img.insert(f[v]);
  return {img.begin(), img.end()};
}

std::vector<std::vector<int>> minimal_sets(const FiniteAlgebra& alg, const Congruence& alpha,
                                           const Congruence& beta) {
  std::set<std::vector<int>> images;
  for (const auto& f : unary_polynomial_monoid(alg))
    if (separates_interval(f, alpha, beta)) images.insert(image_of_map(f));
  std::vector<std::vector<int>> out;
  for (const auto& u : images) {
    bool minimal = true;
    for (const auto& v : images) {
      if (v == u) continue;
      if (std::includes(u.begin(), u.end(), v.begin(), v.end())) {
        minimal = false;
        break;
      }
    }
    if (minimal) out.push_back(u);
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
  return out;
}

bool is_minimal_set(const FiniteAlgebra& alg, const Congruence& alpha, const Congruence& beta,
                    const std::vector<int>& candidate) {
  const auto sets = minimal_sets(alg, alpha, beta);
  return std::find(sets.begin(), sets.end(), candidate) != sets.end();
}

std::optional<int> idempotent_with_image(const AlgebraRef& alg, const std::vector<int>& image) {
  const PolyArena& arena = unary_arena(alg);
  for (std::size_t i = 0; i < arena.size(); ++i) {
    MapTable f(alg->size());
    for (int x = 0; x < alg->size(); ++x) f[x] = arena.map_entry(i, 0, x);
    if (!is_idempotent_map(f)) continue;
    if (image_of_map(f) == image) return static_cast<int>(i);
  }
  return std::nullopt;
}

std::optional<IsoPair> minimal_set_iso(const AlgebraRef& alg, const std::vector<int>& from,
                                       const std::vector<int>& to) {
  const PolyArena& arena = unary_arena(alg);
  const int n = alg->size();
  std::vector<MapTable> maps(arena.size());
  for (std::size_t i = 0; i < arena.size(); ++i) {
    maps[i].resize(n);
    for (int x = 0; x < n; ++x) maps[i][x] = arena.map_entry(i, 0, x);
  }
  for (std::size_t pi = 0; pi < maps.size(); ++pi) {
    if (image_of_set(maps[pi], from) != to) continue;
    for (std::size_t qi = 0; qi < maps.size(); ++qi) {
      if (image_of_set(maps[qi], to) != from) continue;
      bool ok = true;
      for (int x : from) ok = ok && maps[qi][maps[pi][x]] == x;
      for (int y : to) ok = ok && maps[pi][maps[qi][y]] == y;
      if (ok) return IsoPair{static_cast<int>(pi), static_cast<int>(qi)};
    }
  }
  return std::nullopt;
}

std::optional<int> left_inverse_on(const AlgebraRef& alg, const MapTable& f,
                                   const std::vector<int>& U) {
  const PolyArena& arena = unary_arena(alg);
  for (std::size_t i = 0; i < arena.size(); ++i) {
    bool ok = true;
    for (int x : U) {
      if (arena.map_entry(i, 0, f[x]) != x) {
        ok = false;
        break;
      }
    }
    if (ok) return static_cast<int>(i);
  }
  return std::nullopt;
}

}  // namespace sbm
