#pragma once

#include <stdexcept>
#include <string>

namespace zeno {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument violates an operation's precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A numerical routine failed to meet its accuracy or stability target.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Quadrature did not converge; carries the best error estimate reached.
class QuadratureError : public NumericalError {
 public:
  QuadratureError(const std::string& what, double value, double error_estimate)
      : NumericalError(what), value_(value), error_estimate_(error_estimate) {}

  double value() const { return value_; }
  double error_estimate() const { return error_estimate_; }

 private:
  double value_;
  double error_estimate_;
};

}  // namespace zeno
