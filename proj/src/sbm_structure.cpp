#include "sbm/sbm_structure.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <unordered_map>

#include "sbm/error.hpp"

namespace sbm {

namespace {

// Semilattice identities for a binary table on k elements.
std::string semilattice_violation(const std::vector<int>& table, int k) {
  for (int x = 0; x < k; ++x) {
    if (table[x * k + x] != x) return "quotient dot is not idempotent";
    for (int y = 0; y < k; ++y) {
      if (table[x * k + y] != table[y * k + x]) return "quotient dot is not commutative";
      for (int z = 0; z < k; ++z)
        if (table[table[x * k + y] * k + z] != table[x * k + table[y * k + z]])
          return "quotient dot is not associative";
    }
  }
  return "";
}

struct SigmaCheck {
  bool ok = false;
  std::string failure;
};

// All block and quotient conditions for one candidate sigma.
SigmaCheck check_sigma(const FiniteAlgebra& alg, const Congruence& sigma) {
  const int n = alg.size();
  const int k = sigma.num_blocks;
  std::vector<int> qdot(static_cast<std::size_t>(k) * k, -1);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      int& cell = qdot[sigma.block_of[a] * k + sigma.block_of[b]];
      const int val = sigma.block_of[alg.dot(a, b)];
      if (cell == -1)
        cell = val;
      else if (cell != val)
        return {false, "dot is not compatible with the candidate congruence"};
    }
  if (std::string v = semilattice_violation(qdot, k); !v.empty()) return {false, v};

  // m on the quotient must be the join of its three arguments.
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        const int join =
            qdot[qdot[sigma.block_of[a] * k + sigma.block_of[b]] * k + sigma.block_of[c]];
        if (sigma.block_of[alg.m(a, b, c)] != join)
          return {false, "quotient m is not the join of its arguments"};
      }

  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      if (!sigma.related(a, b)) continue;
      if (alg.dot(a, b) != a) return {false, "dot is not first projection inside a block"};
      if (alg.m(a, b, b) != a || alg.m(b, b, a) != a)
        return {false, "m is not Mal'tsev inside a block"};
    }
  return {true, ""};
}

int top_block(const Congruence& sigma, const std::vector<int>& qdot_table) {
  int top = 0;
  for (int b = 1; b < sigma.num_blocks; ++b) top = qdot_table[top * sigma.num_blocks + b];
  return top;
}

std::vector<int> quotient_dot_table(const FiniteAlgebra& alg, const Congruence& sigma) {
  const int k = sigma.num_blocks;
  std::vector<int> rep(k, -1);
  for (int v = alg.size() - 1; v >= 0; --v) rep[sigma.block_of[v]] = v;
  std::vector<int> qdot(static_cast<std::size_t>(k) * k);
  for (int x = 0; x < k; ++x)
    for (int y = 0; y < k; ++y) qdot[x * k + y] = sigma.block_of[alg.dot(rep[x], rep[y])];
  return qdot;
}

}  // namespace

SbmCertificate verify_sbm(const FiniteAlgebra& alg) {
  if (alg.size() > 64) fail(ErrorKind::TooLarge, "algebra too large for lattice search");
  const auto lattice = congruence_lattice(alg);
  std::string first_failure;
  for (const auto& sigma : lattice) {
    const SigmaCheck check = check_sigma(alg, sigma);
    if (!check.ok) {
      if (first_failure.empty()) first_failure = check.failure;
      continue;
    }
    SbmCertificate cert;
    cert.sigma = sigma;
    const auto qdot = quotient_dot_table(alg, sigma);
    const int top = top_block(sigma, qdot);
    cert.max_block = sigma.block_elements(top);
    cert.theta = theta_congruence(alg, sigma);
    cert.is_maltsev = sigma.num_blocks == 1;
    for (int b = 0; b < alg.size(); ++b) {
      bool neutral = true;
      for (int x = 0; x < alg.size() && neutral; ++x)
        neutral = alg.dot(b, x) == x && alg.dot(x, b) == x;
      if (neutral) {
        cert.minimal_element = b;
        break;
      }
    }
    return cert;
  }
  fail(ErrorKind::NotSbm, "no congruence passes the block checks; first failure: " +
                              (first_failure.empty() ? std::string("empty lattice")
                                                     : first_failure));
}

std::optional<Congruence> least_semilattice_congruence(const FiniteAlgebra& alg) {
  for (const auto& sigma : congruence_lattice(alg)) {
    const int k = sigma.num_blocks;
    std::vector<int> qdot(static_cast<std::size_t>(k) * k, -1);
    bool compatible = true;
    for (int a = 0; a < alg.size() && compatible; ++a)
      for (int b = 0; b < alg.size() && compatible; ++b) {
        int& cell = qdot[sigma.block_of[a] * k + sigma.block_of[b]];
        const int val = sigma.block_of[alg.dot(a, b)];
        if (cell == -1)
          cell = val;
        else if (cell != val)
          compatible = false;
      }
    if (compatible && semilattice_violation(qdot, k).empty()) return sigma;
  }
  return std::nullopt;
}

AlgebraRef normalize_operations(const FiniteAlgebra& alg, const Congruence& sigma) {
  if (!is_congruence(alg, sigma))
    fail(ErrorKind::NotACongruence, "normalization congruence is not compatible");
  const int n = alg.size();

  // Iterate d(x,y) = dot(x, d(x,y)) until absorption x(xy) = xy stabilizes.
  std::vector<int> d(static_cast<std::size_t>(n) * n);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) d[x * n + y] = alg.dot(x, y);
  bool stable = false;
  for (int k = 1; k <= n; ++k) {
    stable = true;
    for (int x = 0; x < n && stable; ++x)
      for (int y = 0; y < n && stable; ++y) stable = d[x * n + d[x * n + y]] == d[x * n + y];
    if (stable) break;
    std::vector<int> next(static_cast<std::size_t>(n) * n);
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y) next[x * n + y] = alg.dot(x, d[x * n + y]);
    d = std::move(next);
  }
  if (!stable)
    fail(ErrorKind::NormalizationFailed, "dot absorption did not stabilize within n iterations");

  std::vector<int> m2(static_cast<std::size_t>(n) * n * n);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z) {
        const int xyz = d[x * n + d[y * n + z]];
        m2[(x * n + y) * n + z] = d[alg.m(x, y, z) * n + xyz];
      }

  // The corrected m must keep each value in the block of the dot-fold.
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z)
        if (!sigma.related(m2[(x * n + y) * n + z], d[x * n + d[y * n + z]]))
          fail(ErrorKind::NormalizationFailed, "corrected m leaves the dot-fold block");

  return new_algebra(n, d, m2, alg.name());
}

AlgebraRef normalize_algebra(const FiniteAlgebra& alg) {
  const auto sigma = least_semilattice_congruence(alg);
  if (!sigma)
    fail(ErrorKind::NormalizationFailed, "no congruence has a semilattice quotient under dot");
  return normalize_operations(alg, *sigma);
}

Congruence theta_congruence(const FiniteAlgebra& alg, const Congruence& sigma) {
  const auto qdot = quotient_dot_table(alg, sigma);
  const int top = top_block(sigma, qdot);
  std::vector<int> raw(alg.size());
  int next_id = 1;
  for (int v = 0; v < alg.size(); ++v)
    raw[v] = sigma.block_of[v] == top ? 0 : next_id++;
  const Congruence theta = canonical_partition(raw);
  if (!is_congruence(alg, theta))
    fail(ErrorKind::ThetaNotCongruence, "max block plus singletons is not a congruence");
  return theta;
}

bool is_split_element(const FiniteAlgebra& alg, const Congruence& alpha, const Congruence& beta,
                      int a) {
  for (int b = 0; b < alg.size(); ++b)
    for (int c = b + 1; c < alg.size(); ++c) {
      if (!beta.related(b, c)) continue;
      if (!alpha.related(alg.dot(a, b), alg.dot(a, c))) return true;
    }
  return false;
}

std::vector<int> split_elements(const FiniteAlgebra& alg, const Congruence& alpha,
                                const Congruence& beta) {
  std::vector<int> out;
  for (int a = 0; a < alg.size(); ++a)
    if (is_split_element(alg, alpha, beta, a)) out.push_back(a);
  return out;
}

AlgebraRef generate_fixture(const std::vector<std::vector<int>>& join_table,
                            const std::vector<int>& group_orders, const std::string& name) {
  const int k = static_cast<int>(join_table.size());
  if (k == 0 || group_orders.size() != static_cast<std::size_t>(k))
    fail(ErrorKind::InvalidSemilatticeSpec, "join table and group orders disagree");
  for (const auto& row : join_table) {
    if (row.size() != static_cast<std::size_t>(k))
      fail(ErrorKind::InvalidSemilatticeSpec, "join table is not square");
    for (int v : row)
      if (v < 0 || v >= k) fail(ErrorKind::InvalidSemilatticeSpec, "join entry out of range");
  }
  auto join = [&](int s, int t) { return join_table[s][t]; };
  for (int s = 0; s < k; ++s) {
    if (join(s, s) != s) fail(ErrorKind::InvalidSemilatticeSpec, "join is not idempotent");
    for (int t = 0; t < k; ++t) {
      if (join(s, t) != join(t, s))
        fail(ErrorKind::InvalidSemilatticeSpec, "join is not commutative");
      for (int u = 0; u < k; ++u)
        if (join(join(s, t), u) != join(s, join(t, u)))
          fail(ErrorKind::InvalidSemilatticeSpec, "join is not associative");
    }
  }
  for (int o : group_orders)
    if (o < 1) fail(ErrorKind::InvalidSemilatticeSpec, "group order must be positive");

  // Elements (s, g) numbered block by block.
  std::vector<int> offset(k, 0);
  int n = 0;
  for (int s = 0; s < k; ++s) {
    offset[s] = n;
    n += group_orders[s];
  }
  auto block_of = [&](int v) {
    int s = k - 1;
    while (offset[s] > v) --s;
    return s;
  };
  auto part_of = [&](int v) { return v - offset[block_of(v)]; };
  // Group value an element contributes inside block w: its own value when it
  // already lives in w, the unit 1 (mod |G_w|) otherwise.
  auto transfer = [&](int v, int w) {
    return block_of(v) == w ? part_of(v) : 1 % group_orders[w];
  };

  std::vector<int> dot_table(static_cast<std::size_t>(n) * n);
  std::vector<int> m_table(static_cast<std::size_t>(n) * n * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const int s = block_of(a), t = block_of(b);
      const int w = join(s, t);
      int g;
      if (w == s)
        g = part_of(a);
      else if (w == t)
        g = part_of(b);
      else
        g = 0;
      dot_table[a * n + b] = offset[w] + g;
      for (int c = 0; c < n; ++c) {
        const int wm = join(w, block_of(c));
        const int o = group_orders[wm];
        const int g2 =
            ((transfer(a, wm) - transfer(b, wm) + transfer(c, wm)) % o + o) % o;
        m_table[(a * n + b) * n + c] = offset[wm] + g2;
      }
    }
  return new_algebra(n, dot_table, m_table, name);
}

namespace {

std::vector<std::vector<int>> chain_join(int k) {
  std::vector<std::vector<int>> join(k, std::vector<int>(k));
  for (int s = 0; s < k; ++s)
    for (int t = 0; t < k; ++t) join[s][t] = std::max(s, t);
  return join;
}

// Two incomparable atoms below one top element.
std::vector<std::vector<int>> vee_join() {
  return {{0, 2, 2}, {2, 1, 2}, {2, 2, 2}};
}

std::vector<int> parse_order_list(const std::string& text) {
  std::vector<int> orders;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, '_')) {
    if (part.empty()) return {};
    for (char ch : part)
      if (!std::isdigit(static_cast<unsigned char>(ch))) return {};
    orders.push_back(std::stoi(part));
  }
  return orders;
}

AlgebraRef projection_algebra(int n, const std::string& name) {
  std::vector<int> dot_table(static_cast<std::size_t>(n) * n);
  std::vector<int> m_table(static_cast<std::size_t>(n) * n * n);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      dot_table[x * n + y] = x;
      for (int z = 0; z < n; ++z) m_table[(x * n + y) * n + z] = x;
    }
  return new_algebra(n, dot_table, m_table, name);
}

}  // namespace

AlgebraRef lookup_algebra(const std::string& name, const std::map<std::string, AlgebraRef>& extra) {
  if (auto it = extra.find(name); it != extra.end()) return it->second;
  static thread_local std::map<std::string, AlgebraRef> cache;
  if (auto it = cache.find(name); it != cache.end()) return it->second;

  AlgebraRef alg;
  if (name == "fixb")
    alg = generate_fixture(chain_join(2), {1, 2}, name);
  else if (name == "fixa")
    alg = generate_fixture(chain_join(2), {2, 2}, name);
  else if (name == "z2")
    alg = generate_fixture(chain_join(1), {2}, name);
  else if (name == "z3")
    alg = generate_fixture(chain_join(1), {3}, name);
  else if (name == "z4")
    alg = generate_fixture(chain_join(1), {4}, name);
  else if (name == "p3")
    alg = projection_algebra(3, name);
  else if (name.rfind("chain_", 0) == 0) {
    const auto orders = parse_order_list(name.substr(6));
    if (orders.empty()) fail(ErrorKind::InvalidSemilatticeSpec, "bad chain spec: " + name);
    alg = generate_fixture(chain_join(static_cast<int>(orders.size())), orders, name);
  } else if (name.rfind("vee_", 0) == 0) {
    const auto orders = parse_order_list(name.substr(4));
    if (orders.size() != 3) fail(ErrorKind::InvalidSemilatticeSpec, "bad vee spec: " + name);
    alg = generate_fixture(vee_join(), orders, name);
  } else {
    fail(ErrorKind::BadIndex, "unknown algebra name: " + name);
  }
  cache.emplace(name, alg);
  return alg;
}

const SbmCertificate& certificate_for(const AlgebraRef& alg) {
  static thread_local std::unordered_map<std::string, SbmCertificate> cache;
  const std::string key = alg->table_signature();
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, verify_sbm(*alg)).first;
  return it->second;
}

bool tuple_in_max(const std::vector<AlgebraRef>& domains, const std::vector<int>& tuple) {
  for (std::size_t i = 0; i < tuple.size(); ++i) {
    const auto& cert = certificate_for(domains[i]);
    if (!std::binary_search(cert.max_block.begin(), cert.max_block.end(), tuple[i])) return false;
  }
  return true;
}

}  // namespace sbm
