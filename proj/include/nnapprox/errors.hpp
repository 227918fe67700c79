#pragma once

#include <stdexcept>
#include <string>

namespace nnapprox {

/// Precondition failure on user-supplied values (bad epsilon, rho outside
/// [0,1], malformed documents).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DimensionMismatch : public InvalidArgument {
 public:
  DimensionMismatch(std::size_t expected, std::size_t got)
      : InvalidArgument("dimension mismatch: expected " + std::to_string(expected) +
                        ", got " + std::to_string(got)) {}
};

/// A requested capability is not available for the given set (no exact
/// coefficient path, no signed distance).
class Unsupported : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Coefficient-count or sample-count caps would be exceeded.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace nnapprox
