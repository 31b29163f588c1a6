#pragma once

#include <stdexcept>
#include <string>

namespace pgl {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operand shapes do not agree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// A matrix or vector violates a structural invariant (Laplacian, mask, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A configuration value is out of range.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Malformed file or unparsable input.
class FormatError : public Error {
 public:
  using Error::Error;
};

// A linear system that must be SPD could not be factorized.
class SingularSystemError : public Error {
 public:
  using Error::Error;
};

}  // namespace pgl
