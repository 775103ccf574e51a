#pragma once

#include <stdexcept>
#include <string>

namespace qcamsim {

// Raised when a state would exceed the configured qubit budget.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A quantum result disagreed with its classical check.
class VerificationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qcamsim
