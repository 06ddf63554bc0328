#pragma once

#include <stdexcept>
#include <string>

namespace frobdyn {

// Invalid input to an operation (zero element, non-dominant map, ...).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A documented precondition of an algorithm does not hold for the input.
class PreconditionViolated : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Request outside the supported model (inseparable directions, point
// arithmetic on non-torus factors, ...).
class Unsupported : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An internal self-check failed; always a bug or a retry exhaustion.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, int line, int column)
      : std::runtime_error(msg + " at " + std::to_string(line) + ":" +
                           std::to_string(column)),
        line_(line),
        column_(column) {}
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

}  // namespace frobdyn
