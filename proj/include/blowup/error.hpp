#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace blowup {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the domain of an operation (e.g. t < 0 for a power law).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Adaptive quadrature failed to reach the requested tolerance.
class QuadratureError : public Error {
 public:
  QuadratureError(const std::string& what, double estimate, double error_estimate)
      : Error(what), estimate_(estimate), error_estimate_(error_estimate) {}
  double estimate() const noexcept { return estimate_; }
  double error_estimate() const noexcept { return error_estimate_; }

 private:
  double estimate_;
  double error_estimate_;
};

/// An improper integral does not converge.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

/// Two independent estimates of the same quantity disagree beyond tolerance.
class InconclusiveError : public Error {
 public:
  InconclusiveError(const std::string& what, double first, double second)
      : Error(what), first_(first), second_(second) {}
  double first() const noexcept { return first_; }
  double second() const noexcept { return second_; }

 private:
  double first_;
  double second_;
};

/// Iterative solver failure; carries the residual history for diagnostics.
class SolverError : public Error {
 public:
  SolverError(const std::string& what, std::vector<double> history = {})
      : Error(what), history_(std::move(history)) {}
  const std::vector<double>& history() const noexcept { return history_; }

 private:
  std::vector<double> history_;
};

/// Malformed configuration text. Line and column are 1-based.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& message, int line, int column)
      : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
              message),
        line_(line),
        column_(column) {}
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

}  // namespace blowup
