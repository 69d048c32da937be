#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pathmatch {

enum class ErrorCode {
  CycleDetected,
  MultipleRoots,
  IndexOutOfRange,
  InvalidMatching,
  InstanceTooLarge,
  EmptyCorpus,
  ArityMismatch,
  RetriesExhausted,
  PathNotChain,
  DomainError,
  DegenerateRow,
  DimsTooLarge,
  EmptyInput,
  ParseError,
  UsageError,
  IoError,
  IntegrityWarning,
};

std::string_view to_string(ErrorCode code);

/// Library-wide exception. `code()` is stable and machine-readable; `what()`
/// carries the human-readable detail.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(detail), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace pathmatch
