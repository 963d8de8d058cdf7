#pragma once

#include <stdexcept>
#include <string>

namespace couplex {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Arithmetic between scalars (or matrices) over different fields.
class FieldMismatch : public Error {
 public:
  using Error::Error;
};

/// Malformed textual or JSON input.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Input that parses but violates a mathematical invariant
/// (non-exact couple, d∘d ≠ 0, cyclic attachment relation, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A consistency check that can only fail on an implementation bug.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace couplex
