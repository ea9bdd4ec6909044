#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace kpls {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad user input: dimensions, domains, malformed files.
class InputError : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public InputError {
 public:
  using InputError::InputError;
};

class ParseError : public InputError {
 public:
  ParseError(const std::string& what, std::size_t row, std::size_t column)
      : InputError(what + " (row " + std::to_string(row) + ", column " + std::to_string(column) + ")"),
        row_(row),
        column_(column) {}
  std::size_t row() const { return row_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t row_;
  std::size_t column_;
};

// A documented precondition of a routine does not hold for otherwise valid input.
class PreconditionError : public InputError {
 public:
  using InputError::InputError;
};

// Anything the numerics refuse to produce.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class NumericalFailure : public NumericalError {
 public:
  NumericalFailure(const std::string& what, double residual)
      : NumericalError(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

class SingularSystem : public NumericalError {
 public:
  SingularSystem(const std::string& what, double rcond) : NumericalError(what), rcond_(rcond) {}
  double rcond() const { return rcond_; }

 private:
  double rcond_;
};

// Θ̂ too ill-conditioned for the plain Krylov estimator.
class SingularKrylov : public SingularSystem {
 public:
  using SingularSystem::SingularSystem;
};

// Population Θ not invertible: K too large for the signal.
class PopulationDegenerate : public SingularSystem {
 public:
  using SingularSystem::SingularSystem;
};

class NotPositiveDefinite : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class EmptyModel : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// Assumption A.1 (positive smallest eigenvalue of R) fails.
class AssumptionViolation : public NumericalError {
 public:
  AssumptionViolation(const std::string& what, double rho_min_r)
      : NumericalError(what), rho_min_r_(rho_min_r) {}
  double rho_min_r() const { return rho_min_r_; }

 private:
  double rho_min_r_;
};

}  // namespace kpls
