#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace zb {

/// Position in a text document, 1-based.
struct SourceLoc {
  std::size_t line = 0;
  std::size_t column = 0;

  std::string to_string() const { return std::to_string(line) + ":" + std::to_string(column); }
  friend bool operator==(const SourceLoc&, const SourceLoc&) = default;
};

/// Malformed input text (lexical or grammatical).
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, SourceLoc loc)
      : std::runtime_error(loc.to_string() + ": " + msg), loc_(loc) {}
  const SourceLoc& loc() const { return loc_; }

 private:
  SourceLoc loc_;
};

/// Well-formed input that violates a semantic rule (undeclared identifier,
/// arity mismatch, unsupported builtin, theory outside scope, ...).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input that is valid but cannot be handled by a given translation mode.
class UnsupportedError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Failure of an external process or filesystem operation.
class ExternalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace zb
