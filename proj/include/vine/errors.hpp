#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace vine {

/// Input outside the domain where a formula is defined (e.g. L <= 0 for
/// axial buckling, kappa*L > pi for the moment arm).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// An invariant on user-provided parameters does not hold.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A closed-form solver disagreed with its bisection cross-check, or an
/// oracle scan disagreed with the fast grid classifier.
class NumericCrossCheckError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed measurement row. `row()` is 1-based and counts the header.
class ParseError : public ValidationError {
 public:
  ParseError(std::size_t row, const std::string& what)
      : ValidationError("row " + std::to_string(row) + ": " + what), row_(row) {}
  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

/// Input file exists but contains no samples.
class EmptyInputError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

}  // namespace vine
