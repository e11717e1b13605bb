#include "sbm/error.hpp"

namespace sbm {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonTotalTable: return "NonTotalTable";
    case ErrorKind::NotIdempotent: return "NotIdempotent";
    case ErrorKind::EmptySeed: return "EmptySeed";
    case ErrorKind::NotACongruence: return "NotACongruence";
    case ErrorKind::NotSubdirect: return "NotSubdirect";
    case ErrorKind::ClosureBudgetExceeded: return "ClosureBudgetExceeded";
    case ErrorKind::NotIdempotentPolynomial: return "NotIdempotentPolynomial";
    case ErrorKind::NotSbm: return "NotSbm";
    case ErrorKind::NormalizationFailed: return "NormalizationFailed";
    case ErrorKind::ThetaNotCongruence: return "ThetaNotCongruence";
    case ErrorKind::InvalidSemilatticeSpec: return "InvalidSemilatticeSpec";
    case ErrorKind::BadIndex: return "BadIndex";
    case ErrorKind::NotTransitive: return "NotTransitive";
    case ErrorKind::PreconditionViolated: return "PreconditionViolated";
    case ErrorKind::NotMaltsevDomain: return "NotMaltsevDomain";
    case ErrorKind::ElementOutOfDomain: return "ElementOutOfDomain";
    case ErrorKind::Rejected: return "Rejected";
    case ErrorKind::NotAligned: return "NotAligned";
    case ErrorKind::InternalInvariantViolated: return "InternalInvariantViolated";
    case ErrorKind::DescentFailed: return "DescentFailed";
    case ErrorKind::NoMaxSolution: return "NoMaxSolution";
    case ErrorKind::TooLarge: return "TooLarge";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

void fail(ErrorKind kind, const std::string& message) { throw Error(kind, message); }

void require_internal(bool condition, const std::string& message) {
  if (!condition) fail(ErrorKind::InternalInvariantViolated, message);
}

}  // namespace sbm
