#pragma once

#include <stdexcept>
#include <string>

namespace zerofree {

/// Input violates a documented precondition (bad parameters, size caps,
/// malformed instance files). The CLI maps this to exit code 2.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical procedure did not reach its acceptance test (non-integer
/// contour count, Newton stall, critical point hit during continuation).
/// The CLI maps this to exit code 3.
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace zerofree
