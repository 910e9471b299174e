#pragma once

#include <stdexcept>
#include <string>

namespace ssk {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Requested rate exceeds what the constellation family can carry.
class RateInfeasibleError : public Error {
 public:
  using Error::Error;
};

/// Externally supplied codeword list violates length or distance requirements.
class InvalidCodeError : public Error {
 public:
  using Error::Error;
};

/// Operation needs at least two symbols.
class DegenerateAlphabetError : public Error {
 public:
  using Error::Error;
};

/// Vector/matrix dimensions do not match the configured antenna counts.
class DimensionMismatchError : public Error {
 public:
  using Error::Error;
};

/// Exact search instance exceeds the configured node budget.
class BudgetExceededError : public Error {
 public:
  using Error::Error;
};

/// Symbol not present in the codebook.
class UnknownSymbolError : public Error {
 public:
  using Error::Error;
};

/// Numerical routine failed to reach the requested tolerance.
class NonConvergenceError : public Error {
 public:
  NonConvergenceError(const std::string& what, double achieved_tolerance)
      : Error(what), achieved_tolerance_(achieved_tolerance) {}
  double achieved_tolerance() const { return achieved_tolerance_; }

 private:
  double achieved_tolerance_;
};

}  // namespace ssk
