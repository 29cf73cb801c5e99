#pragma once

#include <stdexcept>
#include <string>

namespace diskcurv {

// Base of every error raised by the library. Callers that only care about
// "something went wrong" catch this; the CLI maps the subclasses to exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad mesh/group/solver parameters, incompatible inputs.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Field with NaN/Inf entries or wrong length.
class InvalidFieldError : public Error {
 public:
  using Error::Error;
};

// Caller violated a documented precondition (e.g. nonzero boundary values
// for the Dirichlet Moser-Trudinger variant).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Argument outside the mathematical domain of an operation (|a| >= 1 for a
// disk automorphism, rho outside [0, 2pi]).
class DomainError : public Error {
 public:
  using Error::Error;
};

enum class Admissibility { area, boundary };

// The iterate left the admissible set: int K e^u <= 0 or int h e^{u/2} <= 0.
// Line searches catch this and backtrack.
class OutsideAdmissibleError : public Error {
 public:
  OutsideAdmissibleError(Admissibility which, const std::string& what)
      : Error(what), which_(which) {}
  Admissibility which() const noexcept { return which_; }

 private:
  Admissibility which_;
};

// d/drho is unbounded at rho = 0 and rho = 2pi.
class EndpointDerivativeError : public Error {
 public:
  using Error::Error;
};

// K <= 0 everywhere or h <= 0 everywhere: the admissible set is empty.
class InfeasibleProblemError : public Error {
 public:
  using Error::Error;
};

// Backtracking could not bring a trial step back into the admissible set.
class StalledOutsideAdmissibleError : public Error {
 public:
  using Error::Error;
};

// The two normalization constants of a minimizer disagree beyond tolerance.
class InconsistentMinimizerError : public Error {
 public:
  using Error::Error;
};

// Linear solve failure and similar numerical breakdowns.
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace diskcurv
