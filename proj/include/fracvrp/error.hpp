#pragma once

#include <stdexcept>
#include <string>

namespace fracvrp {

// Malformed input text. line() is 1-based, 0 when the error is not tied to a line.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int line)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

class UnsupportedFormat : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Data that violates a model invariant (bad instance, bad vertex index, ...).
class InvalidInput : public std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

class RouteInfeasible : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// No feasible solution exists (instance, route set, or set-partitioning problem).
class Infeasible : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A runtime convergence or optimality certificate did not hold.
class CertificateViolation : public std::logic_error {
  using std::logic_error::logic_error;
};

}  // namespace fracvrp
