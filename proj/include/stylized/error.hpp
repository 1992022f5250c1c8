#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace stylized {

enum class ErrorKind {
  Format,            // malformed input file (missing column, bad header)
  Row,               // unparseable value on a specific row
  EmptySeries,       // nothing left after cleaning
  InsufficientData,  // series too short for the requested computation
  InvalidArgument,   // caller passed a value outside the documented domain
  Degenerate,        // zero variance, constant series, |r| == 1, ...
  UnsupportedSize,   // sample size outside the supported range of a test
  InsufficientTail,  // not enough positive observations for a tail estimate
  NumericOverflow,   // non-finite value inside a recursion
  NotConverged,      // optimizer stopped without meeting its tolerance
  Input,             // unreadable file, duplicate names, bad manifest
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Format: return "format";
    case ErrorKind::Row: return "row";
    case ErrorKind::EmptySeries: return "empty-series";
    case ErrorKind::InsufficientData: return "insufficient-data";
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::Degenerate: return "degenerate";
    case ErrorKind::UnsupportedSize: return "unsupported-size";
    case ErrorKind::InsufficientTail: return "insufficient-tail";
    case ErrorKind::NumericOverflow: return "numeric-overflow";
    case ErrorKind::NotConverged: return "not-converged";
    case ErrorKind::Input: return "input";
  }
  return "unknown";
}

/// Single exception type for the library; `kind()` distinguishes causes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  Error(ErrorKind kind, const std::string& what, std::size_t row)
      : std::runtime_error(what), kind_(kind), row_(row) {}

  [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }
  /// 1-based line number in the source file for row errors.
  [[nodiscard]] std::optional<std::size_t> row() const noexcept { return row_; }

 private:
  ErrorKind kind_;
  std::optional<std::size_t> row_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

}  // namespace stylized
