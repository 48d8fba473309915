#pragma once

#include <stdexcept>
#include <string>

namespace hmfsvm {

// Base of every exception thrown by the library. The subclasses map onto the
// CLI exit codes (input = 1, config = 2, everything else = 3).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent data handed to an operation.
class InputError : public Error {
 public:
  using Error::Error;
};

// Invalid configuration or hyperparameters.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// The data cannot support the requested fit (e.g. a class is missing).
class TrainingError : public Error {
 public:
  using Error::Error;
};

// An object was used in a state that does not allow the call.
class StateError : public Error {
 public:
  using Error::Error;
};

}  // namespace hmfsvm
