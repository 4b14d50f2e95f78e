#pragma once

#include <stdexcept>
#include <string>

namespace ffpgn {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A result could not be certified at the stored precision; the caller has
/// to supply more coefficients.
class PrecisionError : public Error {
 public:
  using Error::Error;
};

/// Malformed textual or JSON input.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// An argument violates a documented precondition (dimension mismatch,
/// non-unit determinant, repeated parameters, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

class DivisionByZero : public PreconditionError {
 public:
  DivisionByZero() : PreconditionError("division by zero") {}
};

/// A checked identity failed. Raised by verification routines.
class VerificationFailure : public Error {
 public:
  using Error::Error;
};

/// Internal invariant breach. Indicates a bug, never bad input.
class InvariantError : public Error {
 public:
  using Error::Error;
};

}  // namespace ffpgn
