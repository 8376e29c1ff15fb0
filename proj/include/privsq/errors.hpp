#pragma once

#include <stdexcept>
#include <string>

namespace privsq {

/// Unknown, duplicated, or otherwise invalid subsystem label.
class LabelError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Dimension or matrix-shape mismatch.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A value violates a type invariant (Hermiticity, trace, positivity, ...).
class InvariantError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace privsq
