#pragma once

#include <stdexcept>
#include <string>

namespace qfi {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Mismatched cutoffs, empty or zero-norm amplitude vectors.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// A requested number state does not fit below the cutoff.
class CutoffError : public Error {
 public:
  using Error::Error;
};

// The state's probability mass beyond the cutoff exceeds the tolerance.
class TruncationError : public Error {
 public:
  TruncationError(const std::string& what, int required_cutoff, double tail)
      : Error(what), required_cutoff_(required_cutoff), tail_(tail) {}

  // Smallest cutoff for which the tail drops below the tolerance, or -1 when
  // it could not be found below the search cap.
  int required_cutoff() const noexcept { return required_cutoff_; }
  double tail() const noexcept { return tail_; }

 private:
  int required_cutoff_;
  double tail_;
};

// Two routes that must agree algebraically did not (e.g. an imaginary QFI).
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

class InvariantViolation : public Error {
 public:
  using Error::Error;
};

// Finite-difference derivative changed too much when the step was halved.
class DerivativeInstabilityError : public Error {
 public:
  using Error::Error;
};

// Every point of a phase grid was unusable.
class DegenerateGridError : public Error {
 public:
  using Error::Error;
};

}  // namespace qfi
