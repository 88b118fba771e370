#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cdlat {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad argument: composite modulus, dimension mismatch, out-of-range parameter.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A construction's parameter constraint was violated.
class ConstraintError : public Error {
 public:
  using Error::Error;
};

/// Malformed CGP or cdl text.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Exhaustive search would exceed the configured subspace budget.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace cdlat
