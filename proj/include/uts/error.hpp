#pragma once

#include <stdexcept>
#include <string>

namespace uts {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand dimensions do not agree with the ambient (r, d).
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// An argument lies outside the domain of an operation (k beyond a table,
/// overlapping glue pieces, an index set too sparse, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Malformed or schema-violating external input (scenario, certificate, ...).
class SchemaError : public Error {
 public:
  using Error::Error;
};

}  // namespace uts
