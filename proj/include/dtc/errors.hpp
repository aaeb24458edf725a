#pragma once

#include <stdexcept>
#include <string>

namespace dtc {

/// Malformed argument: out-of-range qubit, bad bitstring, dimension mismatch.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A request exceeds a configured size or work cap.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Run configuration could not be parsed or is inconsistent.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dtc
