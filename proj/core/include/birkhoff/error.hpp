#pragma once

#include <stdexcept>
#include <string>

namespace birkhoff {

/// Caller supplied a value outside an operation's domain (bad flag, bad
/// config, diverging series). Maps to CLI exit code 1.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numeric budget or horizon was exceeded, or a self-check failed.
/// Maps to CLI exit code 2.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Requested work exceeds a configured capacity (memory or O(N^2) budget).
class CapacityError : public NumericError {
 public:
  using NumericError::NumericError;
};

/// Query index lies past the horizon a table was built for.
class OutOfHorizon : public NumericError {
 public:
  using NumericError::NumericError;
};

}  // namespace birkhoff
