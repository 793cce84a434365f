#pragma once

#include <stdexcept>
#include <string>

namespace matchlab {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input, precondition violation, or schema problem.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// Requested enumeration exceeds a configured budget.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

/// A subgroup offered to a local-matching query does not qualify.
class QualificationError : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

/// A proven inequality or equivalence failed on a concrete instance.
/// Either the implementation is wrong or the statement is; both must be loud.
class TheoremViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace matchlab
