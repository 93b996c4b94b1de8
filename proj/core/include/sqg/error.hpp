#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sqg {

/// Stable error codes. The string form of a code is part of the wire format
/// (CLI error payloads carry it in their "code" field), so names never change.
enum class ErrorCode {
  NonStochastic,
  Negative,
  DimensionMismatch,
  EmptyGraph,
  NotSymmetric,
  OutOfRange,
  EmptyList,
  NotSurjective,
  ZeroCopies,
  BudgetExceeded,
  NoValidSamples,
  KMismatch,
  TooLarge,
  PreconditionViolated,
  NoRoot,
  NoPositiveAtom,
  NotRational,
  DenominatorTooLarge,
  MissingSubset,
  CapExceeded,
  ParseError,
  IoError,
  Usage,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

/// True for outcomes that mean "the mathematical check failed on valid input"
/// rather than "the input was unusable". The CLI maps these to exit code 1.
bool is_math_failure(ErrorCode code) noexcept;

}  // namespace sqg
