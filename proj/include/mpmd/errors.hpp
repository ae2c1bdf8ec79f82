#pragma once

#include <stdexcept>
#include <string>

namespace mpmd {

/// Malformed or contract-violating input (bad instance, bad delay table...).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A computation was asked to run past its exhaustive-search limits.
class ScaleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// No finite-cost solution exists for the input as given.
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An internal invariant that the algorithms guarantee was observed broken.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace mpmd
