#pragma once

#include <stdexcept>
#include <string>

namespace tractorlab {

/// Base class for every error raised by the engine.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands live over different numbers of coordinates, or slot shapes
/// do not match.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A rational function was evaluated at one of its poles.
class EvaluationError : public Error {
 public:
  using Error::Error;
};

/// Thomas-D applied at the weight w = (2 - n) / 2.
class SingularWeightError : public Error {
 public:
  using Error::Error;
};

/// A mathematical precondition of an operation does not hold (input is
/// not conformal Killing, scale tractor is not parallel, iota = 0, ...).
/// The message names the failing condition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Malformed JSON artifact or inline expression.
class SchemaError : public Error {
 public:
  using Error::Error;
};

}  // namespace tractorlab
