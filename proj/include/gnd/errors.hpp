#pragma once

#include <stdexcept>
#include <string>

namespace gnd {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed instance data: unknown ids, broken invariants, bad shapes.
class StructuralError : public Error {
 public:
  using Error::Error;
};

// No feasible reply exists for a request under the given graph.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

// Parameters that violate a precondition (epsilon too large, bad family size).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Instance file could not be parsed. line/column are 1-based, 0 when unknown.
class ParseError : public Error {
 public:
  ParseError(std::string message, std::size_t line = 0, std::size_t column = 0)
      : Error(std::move(message)), line_(line), column_(column) {}
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

// Exhaustive enumeration would exceed its configured limits.
class EnumerationRefused : public Error {
 public:
  using Error::Error;
};

// The requested exact computation is above its size threshold.
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

}  // namespace gnd
