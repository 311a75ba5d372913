#pragma once

#include <stdexcept>
#include <string>

namespace nvk {

/// A point or parameter lies outside the domain an operation is defined on.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Numerical integration could not produce a usable value.
class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The integral against a measure diverged, i.e. the measure does not satisfy
/// the growth condition as far as the numerics can tell.
class GrowthViolation : public QuadratureError {
 public:
  using QuadratureError::QuadratureError;
};

}  // namespace nvk
