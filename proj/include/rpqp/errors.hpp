#pragma once

#include <stdexcept>
#include <string>

namespace rpqp {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Inconsistent sizes between matrices/vectors, or d outside [1, n].
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A matrix that must be symmetric is not (within the stated tolerance).
class AsymmetryError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Hessian handed to the convex solver has a negative eigenvalue beyond tolerance.
class NotConvexError : public Error {
 public:
  using Error::Error;
};

class InfeasibleError : public Error {
 public:
  using Error::Error;
};

class UnboundedError : public Error {
 public:
  using Error::Error;
};

/// Invalid argument values (out-of-range parameters, violated preconditions).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Malformed instance or matrix file.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// A modeling assumption (A1..A4') does not hold. `label()` names it.
class AssumptionError : public Error {
 public:
  AssumptionError(std::string label, const std::string& what)
      : Error(label + ": " + what), label_(std::move(label)) {}
  const std::string& label() const { return label_; }

 private:
  std::string label_;
};

}  // namespace rpqp
