#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace levyshrink {

/// Argument outside the domain of an operation (negative time, index outside (0,1), ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A parameter combination the library has no closed form or sampler for.
class UnsupportedCase : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Operation precondition violated by otherwise valid inputs.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A conditional moment that diverges as beta -> 0.
///
/// `exponent` is the power of beta governing the divergence, e.g. -1 for the
/// lasso weight nu / |beta|.
class PoleError : public std::domain_error {
 public:
  PoleError(const std::string& what, double exponent)
      : std::domain_error(what), exponent_(exponent) {}
  double exponent() const noexcept { return exponent_; }

 private:
  double exponent_;
};

/// Quadrature or iterative numerics that failed to reach the requested tolerance.
class NumericError : public std::runtime_error {
 public:
  NumericError(const std::string& what, double achieved)
      : std::runtime_error(what), achieved_(achieved) {}
  double achieved() const noexcept { return achieved_; }

 private:
  double achieved_;
};

/// Iteration budget exhausted. `residual` is the KKT / step residual at exit.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// Penalty whose exp(-nu psi(f(beta))) does not integrate.
class IntegrabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Complete separation in a binary regression; carries the diverging direction.
class SeparationError : public std::runtime_error {
 public:
  SeparationError(const std::string& what, std::vector<double> direction,
                  std::vector<double> last_iterate)
      : std::runtime_error(what),
        direction_(std::move(direction)),
        last_iterate_(std::move(last_iterate)) {}
  const std::vector<double>& direction() const noexcept { return direction_; }
  const std::vector<double>& last_iterate() const noexcept { return last_iterate_; }

 private:
  std::vector<double> direction_;
  std::vector<double> last_iterate_;
};

/// CSV parse failure at a 1-based line.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : std::runtime_error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

struct Cell {
  std::size_t row;
  std::size_t column;
};

/// Missing or non-numeric cells in an input table.
class MissingValueError : public std::runtime_error {
 public:
  MissingValueError(const std::string& what, std::vector<Cell> cells)
      : std::runtime_error(what), cells_(std::move(cells)) {}
  const std::vector<Cell>& cells() const noexcept { return cells_; }

 private:
  std::vector<Cell> cells_;
};

}  // namespace levyshrink
