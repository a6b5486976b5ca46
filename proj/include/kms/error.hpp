#pragma once

#include <stdexcept>
#include <string>

namespace kms {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input: unknown ids, bad weights, parse failures.
class InputError : public Error {
 public:
  using Error::Error;
};

/// A mathematical hypothesis of an operation is not met (e.g. weights must exceed 1).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Path touches a bundle edge where a concrete weight is required.
class UnsupportedPathError : public Error {
 public:
  using Error::Error;
};

class CompositionError : public Error {
 public:
  using Error::Error;
};

/// Backward enumeration ran into an infinite edge bundle.
class InfiniteEnumerationError : public UnsupportedPathError {
 public:
  using UnsupportedPathError::UnsupportedPathError;
};

class NotExpandableError : public Error {
 public:
  using Error::Error;
};

class DecompositionError : public Error {
 public:
  using Error::Error;
};

}  // namespace kms
