#pragma once

#include <stdexcept>
#include <string>

namespace ise {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Document parsing or validation failure; message carries the location.
class SchemaError : public Error {
 public:
  using Error::Error;
};

// Rank-deficient WLS information matrix; message names deficient columns.
class ObservabilityError : public Error {
 public:
  using Error::Error;
};

// Singular midpoint matrix or contraction bound >= 1.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Empty intersection while iterating on a system the caller asserted is
// consistent.
class InconsistencyError : public Error {
 public:
  using Error::Error;
};

// Zero-containing pivot during interval elimination.
class BreakdownError : public Error {
 public:
  using Error::Error;
};

// Iteration cap exceeded.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace ise
