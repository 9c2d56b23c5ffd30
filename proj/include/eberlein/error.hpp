#pragma once

#include <stdexcept>
#include <string>

namespace eberlein {

// Raised when a caller breaks a documented precondition (non-Hermitian
// input to a rotation, unsorted diagonal where sorting was promised, ...).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Numerical breakdown: non-finite iterates, degenerate shear denominators,
// iteration budgets exhausted.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int line, int column)
      : std::runtime_error(format(what, line, column)), line_(line), column_(column) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  static std::string format(const std::string& what, int line, int column) {
    std::string msg = "line " + std::to_string(line);
    if (column > 0) msg += ", column " + std::to_string(column);
    return msg + ": " + what;
  }

  int line_;
  int column_;
};

}  // namespace eberlein
