#pragma once

#include <stdexcept>
#include <string>

namespace keepalive {

// Precondition violated by the caller (bad parameters, out-of-order times).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Missing or inconsistent configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or insufficient input data.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A numerical routine failed to reach its tolerance.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Simulation produced more events than the configured safety cap.
class CapExceededError : public NumericError {
 public:
  using NumericError::NumericError;
};

}  // namespace keepalive
