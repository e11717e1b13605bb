#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sbm/congruence.hpp"
#include "sbm/instance.hpp"
#include "sbm/separation.hpp"

namespace sbm {

// Instance transformation result. value_of[v] maps each element of the new
// domain of v back to the element it came from; lossy marks a shrink whose
// UNSAT answers are not certified.
struct StageResult {
  Instance instance;
  std::vector<std::vector<int>> value_of;
  bool changed = false;
  bool lossy = false;
  std::string diagnostic;
};

// Every domain is replaced by a ferried-down subalgebra until it is Mal'tsev
// or has a minimal element; throws Rejected when no shrink makes progress.
StageResult maroti_preprocess(const Instance& inst);

// Partition of all prime-interval triples below theta into non-separability
// classes, with the variable set of each class.
struct CoherentIndex {
  std::vector<IntervalTriple> triples;
  std::vector<int> class_of;
  int num_classes = 0;
  std::vector<std::vector<int>> class_members;  // triple indices per class
  std::vector<std::vector<int>> class_vars;     // sorted variable sets
};

CoherentIndex coherent_sets(const Instance& inst);

// Split/non-split partition per variable, aligned across all pairwise
// solution sets. Class 0 holds the split elements, class 1 the rest, so the
// cross-variable bijection is the identity on class indices.
struct LinkPartition {
  int k = 0;
  std::vector<std::vector<int>> class_of;  // per variable: element -> class
};

LinkPartition link_partition(const Instance& sub, const std::vector<PrimeInterval>& intervals);

struct BlockMinimalResult {
  Instance instance;
  std::vector<std::vector<int>> value_of;
  bool unsat = false;
  bool lossy = false;
  std::string diagnostic;
};

// Fixpoint of 3-minimality, preprocessing, and per-coherent-set
// minimalization (Mal'tsev directly, otherwise split along the link
// partition and recurse on the strictly smaller class domains).
BlockMinimalResult block_minimality(const Instance& inst);

enum class SolveStatus { Sat, Unsat, Rejected };

struct SolveOutcome {
  SolveStatus status = SolveStatus::Rejected;
  std::optional<std::vector<int>> assignment;
  std::string diagnostic;
};

struct SolveOptions {
  std::ostream* trace = nullptr;  // JSONL round reports
};

// Domains rebuilt with absorptive dot and corrected m; element ids, tuple
// sets, and the solution set are unchanged.
Instance normalize_instance(const Instance& inst);

// Full pipeline with solution extraction and final verification.
SolveOutcome solve(const Instance& inst, const SolveOptions& opts = {});

}  // namespace sbm
