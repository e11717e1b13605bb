#pragma once

#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace sbm {

// Finite idempotent algebra with one binary operation (dot) and one ternary
// operation (m), both given by total tables over the universe {0, ..., size-1}.
class FiniteAlgebra {
 public:
  FiniteAlgebra(std::string name, int size, std::vector<int> dot_table,
                std::vector<int> m_table);

  const std::string& name() const { return name_; }
  int size() const { return size_; }

  int dot(int x, int y) const { return dot_table_[x * size_ + y]; }
  int m(int x, int y, int z) const { return m_table_[(x * size_ + y) * size_ + z]; }

  const std::vector<int>& dot_table() const { return dot_table_; }
  const std::vector<int>& m_table() const { return m_table_; }

  // Byte string determined by size and both tables, independent of the name.
  std::string table_signature() const;

 private:
  std::string name_;
  int size_;
  std::vector<int> dot_table_;
  std::vector<int> m_table_;
};

using AlgebraRef = std::shared_ptr<const FiniteAlgebra>;

// Validates totality, entry ranges, and idempotency of both operations.
AlgebraRef new_algebra(int size, const std::vector<int>& dot_table,
                       const std::vector<int>& m_table, const std::string& name);

AlgebraRef algebra_from_json(const nlohmann::json& j);
nlohmann::json algebra_to_json(const FiniteAlgebra& alg);

// Least subuniverse containing the seed, as a sorted element list.
std::vector<int> generate_subalgebra(const FiniteAlgebra& alg, const std::vector<int>& seed);

// Restriction to a closed element set, relabeled 0..k-1 in the given sorted order.
AlgebraRef sub_algebra(const FiniteAlgebra& alg, const std::vector<int>& elements,
                       const std::string& name);

// Image algebra of an idempotent unary polynomial e, relabeled along sorted image.
AlgebraRef retract_algebra(const FiniteAlgebra& alg, const std::vector<int>& e,
                           const std::string& name);

}  // namespace sbm
