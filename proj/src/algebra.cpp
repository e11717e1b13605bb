#include "sbm/algebra.hpp"

#include <algorithm>
#include <set>

#include <nlohmann/json.hpp>

#include "sbm/error.hpp"
#include "sbm/polynomial.hpp"

namespace sbm {

FiniteAlgebra::FiniteAlgebra(std::string name, int size, std::vector<int> dot_table,
                             std::vector<int> m_table)
    : name_(std::move(name)),
      size_(size),
      dot_table_(std::move(dot_table)),
      m_table_(std::move(m_table)) {}

std::string FiniteAlgebra::table_signature() const {
  std::string sig;
  sig.reserve(4 + dot_table_.size() + m_table_.size());
  sig.push_back(static_cast<char>(size_));
  sig.push_back('|');
  for (int v : dot_table_) sig.push_back(static_cast<char>(v));
  sig.push_back('|');
  for (int v : m_table_) sig.push_back(static_cast<char>(v));
  return sig;
}

AlgebraRef new_algebra(int size, const std::vector<int>& dot_table,
                       const std::vector<int>& m_table, const std::string& name) {
  if (size <= 0) fail(ErrorKind::NonTotalTable, "algebra '" + name + "' has nonpositive size");
  const std::size_t n = static_cast<std::size_t>(size);
  if (dot_table.size() != n * n)
    fail(ErrorKind::NonTotalTable, "algebra '" + name + "' dot table has wrong length");
  if (m_table.size() != n * n * n)
    fail(ErrorKind::NonTotalTable, "algebra '" + name + "' m table has wrong length");
  for (int v : dot_table)
    if (v < 0 || v >= size)
      fail(ErrorKind::NonTotalTable, "algebra '" + name + "' dot entry out of range");
  for (int v : m_table)
    if (v < 0 || v >= size)
      fail(ErrorKind::NonTotalTable, "algebra '" + name + "' m entry out of range");
  for (int x = 0; x < size; ++x) {
    if (dot_table[x * size + x] != x)
      fail(ErrorKind::NotIdempotent, "algebra '" + name + "': dot(" + std::to_string(x) + "," +
                                         std::to_string(x) + ") != " + std::to_string(x));
    if (m_table[(x * size + x) * size + x] != x)
      fail(ErrorKind::NotIdempotent, "algebra '" + name + "': m(x,x,x) != x at x=" +
                                         std::to_string(x));
  }
  return std::make_shared<FiniteAlgebra>(name, size, dot_table, m_table);
}

AlgebraRef algebra_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("name") || !j.contains("size") || !j.contains("dot") ||
      !j.contains("m"))
    fail(ErrorKind::NonTotalTable, "algebra JSON must have name, size, dot, m");
  const std::string name = j.at("name").get<std::string>();
  const int size = j.at("size").get<int>();
  if (size <= 0) fail(ErrorKind::NonTotalTable, "algebra '" + name + "' has nonpositive size");
  std::vector<int> dot_table;
  const auto& dj = j.at("dot");
  if (!dj.is_array() || dj.size() != static_cast<std::size_t>(size))
    fail(ErrorKind::NonTotalTable, "algebra '" + name + "' dot table must be size x size");
  for (const auto& row : dj) {
    if (!row.is_array() || row.size() != static_cast<std::size_t>(size))
      fail(ErrorKind::NonTotalTable, "algebra '" + name + "' dot table must be size x size");
    for (const auto& v : row) dot_table.push_back(v.get<int>());
  }
  std::vector<int> m_table = j.at("m").get<std::vector<int>>();
  return new_algebra(size, dot_table, m_table, name);
}

nlohmann::json algebra_to_json(const FiniteAlgebra& alg) {
  nlohmann::json dj = nlohmann::json::array();
  for (int x = 0; x < alg.size(); ++x) {
    nlohmann::json row = nlohmann::json::array();
    for (int y = 0; y < alg.size(); ++y) row.push_back(alg.dot(x, y));
    dj.push_back(std::move(row));
  }
  return nlohmann::json{{"name", alg.name()},
                        {"size", alg.size()},
                        {"dot", std::move(dj)},
                        {"m", alg.m_table()}};
}

std::vector<int> generate_subalgebra(const FiniteAlgebra& alg, const std::vector<int>& seed) {
  if (seed.empty()) fail(ErrorKind::EmptySeed, "subalgebra generation needs a nonempty seed");
  std::vector<char> in(alg.size(), 0);
  std::vector<int> work;
  for (int v : seed) {
    if (v < 0 || v >= alg.size())
      fail(ErrorKind::ElementOutOfDomain, "seed element " + std::to_string(v) + " out of range");
    if (!in[v]) {
      in[v] = 1;
      work.push_back(v);
    }
  }
  // Worklist closure; each new element is combined with everything already present.
  for (std::size_t qi = 0; qi < work.size(); ++qi) {
    const int q = work[qi];
    auto add = [&](int v) {
      if (!in[v]) {
        in[v] = 1;
        work.push_back(v);
      }
    };
    for (std::size_t j = 0; j <= qi; ++j) {
      const int s = work[j];
      add(alg.dot(q, s));
      add(alg.dot(s, q));
      for (std::size_t k = 0; k <= qi; ++k) {
        const int t = work[k];
        add(alg.m(q, s, t));
        add(alg.m(s, q, t));
        add(alg.m(s, t, q));
      }
    }
  }
  std::vector<int> out;
  for (int v = 0; v < alg.size(); ++v)
    if (in[v]) out.push_back(v);
  return out;
}

AlgebraRef sub_algebra(const FiniteAlgebra& alg, const std::vector<int>& elements,
                       const std::string& name) {
  require_internal(!elements.empty(), "sub_algebra needs a nonempty element set");
  require_internal(std::is_sorted(elements.begin(), elements.end()), "sub_algebra wants sorted elements");
  std::vector<int> pos(alg.size(), -1);
  for (std::size_t i = 0; i < elements.size(); ++i) {
    const int v = elements[i];
    require_internal(v >= 0 && v < alg.size(), "sub_algebra element out of range");
    pos[v] = static_cast<int>(i);
  }
  const int k = static_cast<int>(elements.size());
  std::vector<int> dot_table(static_cast<std::size_t>(k) * k);
  std::vector<int> m_table(static_cast<std::size_t>(k) * k * k);
  for (int x = 0; x < k; ++x)
    for (int y = 0; y < k; ++y) {
      const int d = alg.dot(elements[x], elements[y]);
      require_internal(pos[d] >= 0, "sub_algebra element set not closed under dot");
      dot_table[x * k + y] = pos[d];
      for (int z = 0; z < k; ++z) {
        const int w = alg.m(elements[x], elements[y], elements[z]);
        require_internal(pos[w] >= 0, "sub_algebra element set not closed under m");
        m_table[(x * k + y) * k + z] = pos[w];
      }
    }
  return new_algebra(k, dot_table, m_table, name);
}

AlgebraRef retract_algebra(const FiniteAlgebra& alg, const std::vector<int>& e,
                           const std::string& name) {
  if (e.size() != static_cast<std::size_t>(alg.size()))
    fail(ErrorKind::NotIdempotentPolynomial, "retraction map has wrong length");
  for (int v : e)
    if (v < 0 || v >= alg.size())
      fail(ErrorKind::NotIdempotentPolynomial, "retraction map entry out of range");
  for (int x = 0; x < alg.size(); ++x)
    if (e[e[x]] != e[x])
      fail(ErrorKind::NotIdempotentPolynomial, "retraction map is not idempotent");
  const auto monoid = unary_polynomial_monoid(alg);
  if (!std::binary_search(monoid.begin(), monoid.end(), e))
    fail(ErrorKind::NotIdempotentPolynomial, "retraction map is not a unary polynomial");

  std::set<int> image_set;
  for (int x = 0; x < alg.size(); ++x) image_set.insert(e[x]);
  std::vector<int> image(image_set.begin(), image_set.end());
  std::vector<int> pos(alg.size(), -1);
  for (std::size_t i = 0; i < image.size(); ++i) pos[image[i]] = static_cast<int>(i);

  const int k = static_cast<int>(image.size());
  std::vector<int> dot_table(static_cast<std::size_t>(k) * k);
  std::vector<int> m_table(static_cast<std::size_t>(k) * k * k);
  for (int x = 0; x < k; ++x)
    for (int y = 0; y < k; ++y) {
      dot_table[x * k + y] = pos[e[alg.dot(image[x], image[y])]];
      for (int z = 0; z < k; ++z)
        m_table[(x * k + y) * k + z] = pos[e[alg.m(image[x], image[y], image[z])]];
    }
  return new_algebra(k, dot_table, m_table, name);
}

}  // namespace sbm
