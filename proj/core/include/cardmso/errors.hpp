#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cardmso {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or semantically invalid input (graph file, formula, arguments).
class InputError : public Error {
 public:
  using Error::Error;
};

/// Parse failure with a source position (1-based line and column).
class ParseError : public InputError {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column);

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// A configured search budget was exhausted. The answer is unknown, never wrong.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

/// The minimum vertex cover is larger than the permitted k_max.
class CoverExceedsBudget : public BudgetExceeded {
 public:
  CoverExceedsBudget(std::size_t k_max);
  std::size_t k_max() const { return k_max_; }

 private:
  std::size_t k_max_;
};

/// An internal consistency check failed. Always a bug.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace cardmso
