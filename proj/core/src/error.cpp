#include "sqg/error.hpp"

namespace sqg {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NonStochastic: return "NonStochastic";
    case ErrorCode::Negative: return "Negative";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::EmptyGraph: return "EmptyGraph";
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::EmptyList: return "EmptyList";
    case ErrorCode::NotSurjective: return "NotSurjective";
    case ErrorCode::ZeroCopies: return "ZeroCopies";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::NoValidSamples: return "NoValidSamples";
    case ErrorCode::KMismatch: return "KMismatch";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::PreconditionViolated: return "PreconditionViolated";
    case ErrorCode::NoRoot: return "NoRoot";
    case ErrorCode::NoPositiveAtom: return "NoPositiveAtom";
    case ErrorCode::NotRational: return "NotRational";
    case ErrorCode::DenominatorTooLarge: return "DenominatorTooLarge";
    case ErrorCode::MissingSubset: return "MissingSubset";
    case ErrorCode::CapExceeded: return "CapExceeded";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::Usage: return "Usage";
  }
  return "Unknown";
}

bool is_math_failure(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::PreconditionViolated:
    case ErrorCode::NoValidSamples:
    case ErrorCode::NoRoot:
      return true;
    default:
      return false;
  }
}

}  // namespace sqg
