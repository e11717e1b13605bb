#pragma once

#include <stdexcept>
#include <string>

namespace sbm {

enum class ErrorKind {
  NonTotalTable,
  NotIdempotent,
  EmptySeed,
  NotACongruence,
  NotSubdirect,
  ClosureBudgetExceeded,
  NotIdempotentPolynomial,
  NotSbm,
  NormalizationFailed,
  ThetaNotCongruence,
  InvalidSemilatticeSpec,
  BadIndex,
  NotTransitive,
  PreconditionViolated,
  NotMaltsevDomain,
  ElementOutOfDomain,
  Rejected,
  NotAligned,
  InternalInvariantViolated,
  DescentFailed,
  NoMaxSolution,
  TooLarge,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& message);

// Invariant checks whose failure means a defect in this library, not bad input.
void require_internal(bool condition, const std::string& message);

}  // namespace sbm
