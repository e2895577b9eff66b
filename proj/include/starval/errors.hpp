#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace starval {

/// Membership oracle still reports "inside" at the search radius rmax.
class UnboundedBodyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Membership oracle rejects the origin, so the set is not star-shaped.
class NotStarShapedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operation is not defined for the given representation (e.g. index
/// rotation of a non-circle grid).
class UnsupportedOperationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Exhaustive enumeration would exceed the evaluation budget.
class BudgetExceededError : public std::runtime_error {
 public:
  BudgetExceededError(const std::string& what, std::uint64_t required)
      : std::runtime_error(what), required_(required) {}

  /// Number of evaluations the rejected run would have needed.
  std::uint64_t required_evaluations() const { return required_; }

 private:
  std::uint64_t required_;
};

}  // namespace starval
