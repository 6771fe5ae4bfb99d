#pragma once

#include <stdexcept>
#include <string>

namespace celgc {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A vector contained NaN/Inf where a finite value was required.
class InvalidVectorError : public Error {
 public:
  using Error::Error;
};

/// Two operands had incompatible dimensions.
class DimensionMismatchError : public Error {
 public:
  using Error::Error;
};

/// A configuration value (file, CLI, or model parameter) is unusable.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace celgc
