#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace narmax {

enum class ErrorCode {
  InvalidArgument,
  TermBudgetExceeded,
  DegreeOverflow,
  NotSimplifiedClass,
  NonFinite,
  LengthMismatch,
  SyntaxError,
  MissingAdditiveNoise,
  IllegalLag,
  Cancelled,
  Io,
};

std::string_view to_string(ErrorCode code);

/// Base of every error raised by the library. The code is stable and is what
/// the command line tool reports on stderr.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Parse failure with a 1-based source position.
class ParseError : public Error {
 public:
  ParseError(ErrorCode code, const std::string& message, std::size_t line, std::size_t column)
      : Error(code, message), line_(line), column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// A simulated sample overflowed. `index` is 0-based within the run; `period`
/// is set by the ensemble harness (0 = input period, 1..p = noise periods).
class NonFiniteError : public Error {
 public:
  NonFiniteError(const std::string& message, std::size_t index, std::size_t period = 0)
      : Error(ErrorCode::NonFinite, message), index_(index), period_(period) {}

  std::size_t index() const noexcept { return index_; }
  std::size_t period() const noexcept { return period_; }

 private:
  std::size_t index_;
  std::size_t period_;
};

}  // namespace narmax
