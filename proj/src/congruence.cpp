#include "sbm/congruence.hpp"

#include <algorithm>
#include <numeric>

#include "sbm/error.hpp"

namespace sbm {

std::vector<std::vector<int>> Congruence::blocks() const {
  std::vector<std::vector<int>> out(num_blocks);
  for (int v = 0; v < size(); ++v) out[block_of[v]].push_back(v);
  return out;
}

std::vector<int> Congruence::block_elements(int block) const {
  std::vector<int> out;
  for (int v = 0; v < size(); ++v)
    if (block_of[v] == block) out.push_back(v);
  return out;
}

long Congruence::pair_count() const {
  std::vector<long> sizes(num_blocks, 0);
  for (int v = 0; v < size(); ++v) ++sizes[block_of[v]];
  long total = 0;
  for (long s : sizes) total += s * s;
  return total;
}

Congruence canonical_partition(const std::vector<int>& raw_block_ids) {
  Congruence c;
  c.block_of.assign(raw_block_ids.size(), -1);
  std::vector<int> relabel;
  for (std::size_t v = 0; v < raw_block_ids.size(); ++v) {
    const int raw = raw_block_ids[v];
    int id = -1;
    for (std::size_t w = 0; w < v; ++w)
      if (raw_block_ids[w] == raw) {
        id = c.block_of[w];
        break;
      }
    if (id < 0) {
      id = static_cast<int>(relabel.size());
      relabel.push_back(raw);
    }
    c.block_of[v] = id;
  }
  c.num_blocks = static_cast<int>(relabel.size());
  return c;
}

Congruence zero_congruence(int n) {
  Congruence c;
  c.block_of.resize(n);
  std::iota(c.block_of.begin(), c.block_of.end(), 0);
  c.num_blocks = n;
  return c;
}

Congruence one_congruence(int n) {
  Congruence c;
  c.block_of.assign(n, 0);
  c.num_blocks = n > 0 ? 1 : 0;
  return c;
}

Congruence partition_from_blocks(int n, const std::vector<std::vector<int>>& blocks) {
  std::vector<int> raw(n, -1);
  int id = 0;
  for (const auto& block : blocks) {
    for (int v : block) {
      if (v < 0 || v >= n)
        fail(ErrorKind::ElementOutOfDomain, "partition block element out of range");
      if (raw[v] != -1) fail(ErrorKind::NotACongruence, "partition blocks overlap");
      raw[v] = id;
    }
    ++id;
  }
  for (int v = 0; v < n; ++v)
    if (raw[v] == -1) fail(ErrorKind::NotACongruence, "partition does not cover the universe");
  return canonical_partition(raw);
}

bool finer_or_equal(const Congruence& a, const Congruence& b) {
  // a-block representatives must map into a single b-block.
  std::vector<int> image(a.num_blocks, -1);
  for (int v = 0; v < a.size(); ++v) {
    int& img = image[a.block_of[v]];
    if (img == -1)
      img = b.block_of[v];
    else if (img != b.block_of[v])
      return false;
  }
  return true;
}

bool congruence_less(const Congruence& a, const Congruence& b) {
  const long pa = a.pair_count(), pb = b.pair_count();
  if (pa != pb) return pa < pb;
  return a.block_of < b.block_of;
}

bool is_congruence(const FiniteAlgebra& alg, const Congruence& c) {
  const int n = alg.size();
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      if (!c.related(a, b)) continue;
      for (int x = 0; x < n; ++x) {
        if (!c.related(alg.dot(a, x), alg.dot(b, x))) return false;
        if (!c.related(alg.dot(x, a), alg.dot(x, b))) return false;
        for (int y = 0; y < n; ++y) {
          if (!c.related(alg.m(a, x, y), alg.m(b, x, y))) return false;
          if (!c.related(alg.m(x, a, y), alg.m(x, b, y))) return false;
          if (!c.related(alg.m(x, y, a), alg.m(x, y, b))) return false;
        }
      }
    }
  return true;
}

Congruence make_congruence(const FiniteAlgebra& alg,
                           const std::vector<std::vector<int>>& blocks) {
  Congruence c = partition_from_blocks(alg.size(), blocks);
  if (!is_congruence(alg, c))
    fail(ErrorKind::NotACongruence, "partition is not compatible with the operations");
  return c;
}

namespace {

class UnionFind {
 public:
  explicit UnionFind(int n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  int find(int x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  bool merge(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (a > b) std::swap(a, b);
    parent_[b] = a;
    return true;
  }

 private:
  std::vector<int> parent_;
};

}  // namespace

Congruence generate_congruence(const FiniteAlgebra& alg,
                               const std::vector<std::pair<int, int>>& pairs) {
  const int n = alg.size();
  UnionFind uf(n);
  std::vector<std::pair<int, int>> work;
  for (auto [a, b] : pairs) {
    if (a < 0 || a >= n || b < 0 || b >= n)
      fail(ErrorKind::ElementOutOfDomain, "congruence generator pair out of range");
    if (uf.merge(a, b)) work.emplace_back(a, b);
  }
  // One-step translations suffice for congruence generation; transitivity is
  // supplied by the union-find.
  for (std::size_t qi = 0; qi < work.size(); ++qi) {
    const auto [a, b] = work[qi];
    auto push = [&](int x, int y) {
      if (uf.merge(x, y)) work.emplace_back(x, y);
    };
    for (int c = 0; c < n; ++c) {
      push(alg.dot(a, c), alg.dot(b, c));
      push(alg.dot(c, a), alg.dot(c, b));
      for (int d = 0; d < n; ++d) {
        push(alg.m(a, c, d), alg.m(b, c, d));
        push(alg.m(c, a, d), alg.m(c, b, d));
        push(alg.m(c, d, a), alg.m(c, d, b));
      }
    }
  }
  std::vector<int> raw(n);
  for (int v = 0; v < n; ++v) raw[v] = uf.find(v);
  return canonical_partition(raw);
}

Congruence join_congruence(const FiniteAlgebra& alg, const Congruence& a, const Congruence& b) {
  std::vector<std::pair<int, int>> pairs;
  for (int v = 0; v < alg.size(); ++v)
    for (int w = v + 1; w < alg.size(); ++w)
      if (a.related(v, w) || b.related(v, w)) pairs.emplace_back(v, w);
  return generate_congruence(alg, pairs);
}

Congruence meet_congruence(const Congruence& a, const Congruence& b) {
  std::vector<int> raw(a.size());
  for (int v = 0; v < a.size(); ++v) raw[v] = a.block_of[v] * (b.num_blocks + 1) + b.block_of[v];
  return canonical_partition(raw);
}

std::vector<Congruence> congruence_lattice(const FiniteAlgebra& alg) {
  const int n = alg.size();
  std::vector<Congruence> found;
  auto add = [&](const Congruence& c) {
    for (const auto& old : found)
      if (old == c) return false;
    found.push_back(c);
    return true;
  };
  add(zero_congruence(n));
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) add(generate_congruence(alg, {{a, b}}));
  // Principal congruences generate the lattice under join.
  bool grew = true;
  while (grew) {
    grew = false;
    const std::size_t count = found.size();
    for (std::size_t i = 0; i < count && !grew; ++i)
      for (std::size_t j = i + 1; j < count && !grew; ++j)
        if (add(join_congruence(alg, found[i], found[j]))) grew = true;
  }
  std::sort(found.begin(), found.end(), congruence_less);
  return found;
}

std::vector<PrimeInterval> prime_intervals_below(const FiniteAlgebra& alg,
                                                 const Congruence& theta) {
  const auto lattice = congruence_lattice(alg);
  std::vector<Congruence> below;
  for (const auto& c : lattice)
    if (finer_or_equal(c, theta)) below.push_back(c);
  std::vector<PrimeInterval> out;
  for (const auto& alpha : below)
    for (const auto& beta : below) {
      if (alpha == beta || !finer_or_equal(alpha, beta)) continue;
      bool covered = true;
      for (const auto& mid : below) {
        if (mid == alpha || mid == beta) continue;
        if (finer_or_equal(alpha, mid) && finer_or_equal(mid, beta)) {
          covered = false;
          break;
        }
      }
      if (covered) out.push_back(PrimeInterval{alpha, beta});
    }
  std::sort(out.begin(), out.end(), [](const PrimeInterval& x, const PrimeInterval& y) {
    if (x.alpha != y.alpha) return congruence_less(x.alpha, y.alpha);
    return congruence_less(x.beta, y.beta);
  });
  return out;
}

AlgebraRef quotient_algebra(const FiniteAlgebra& alg, const Congruence& cong,
                            const std::string& name) {
  const int k = cong.num_blocks;
  std::vector<int> rep(k, -1);
  for (int v = alg.size() - 1; v >= 0; --v) rep[cong.block_of[v]] = v;
  std::vector<int> dot_table(static_cast<std::size_t>(k) * k);
  std::vector<int> m_table(static_cast<std::size_t>(k) * k * k);
  for (int x = 0; x < k; ++x)
    for (int y = 0; y < k; ++y) {
      dot_table[x * k + y] = cong.block_of[alg.dot(rep[x], rep[y])];
      for (int z = 0; z < k; ++z)
        m_table[(x * k + y) * k + z] = cong.block_of[alg.m(rep[x], rep[y], rep[z])];
    }
  // Well-definedness check: representatives must not matter.
  for (int a = 0; a < alg.size(); ++a)
    for (int b = 0; b < alg.size(); ++b) {
      if (dot_table[cong.block_of[a] * k + cong.block_of[b]] != cong.block_of[alg.dot(a, b)])
        fail(ErrorKind::NotACongruence, "quotient dot is not well defined");
      for (int c = 0; c < alg.size(); ++c)
        if (m_table[(cong.block_of[a] * k + cong.block_of[b]) * k + cong.block_of[c]] !=
            cong.block_of[alg.m(a, b, c)])
          fail(ErrorKind::NotACongruence, "quotient m is not well defined");
    }
  return new_algebra(k, dot_table, m_table, name);
}

}  // namespace sbm
