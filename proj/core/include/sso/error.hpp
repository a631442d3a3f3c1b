#pragma once

#include <stdexcept>
#include <string>

namespace sso {

enum class ErrorCode {
  ZeroColumn,
  NonUnitColumn,
  NonPositiveValue,
  ShapeMismatch,
  EmptyColumnInPattern,
  RowNotInColumn,
  AllRowsZero,
  InvalidShape,
  InvalidOptions,
  InvalidInitialPoint,
  ParseError,
  EigFailure,
  GuardExceeded,
  DegenerateP,
  DegenerateAssignment,
  IoError,
};

// Single exception type for the whole library. `code` identifies the failed
// contract; `row`/`col` carry the offending indices when applicable (-1
// otherwise).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, long row = -1, long col = -1)
      : std::runtime_error(message), code_(code), row_(row), col_(col) {}

  ErrorCode code() const noexcept { return code_; }
  long row() const noexcept { return row_; }
  long col() const noexcept { return col_; }

 private:
  ErrorCode code_;
  long row_;
  long col_;
};

}  // namespace sso
