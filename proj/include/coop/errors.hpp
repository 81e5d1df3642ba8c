#pragma once

#include <stdexcept>
#include <string>

namespace coop {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter set or state violates its documented invariants.
class InvalidParameter : public Error {
 public:
  using Error::Error;
};

/// A closed-form threshold was requested outside its domain of definition.
class UndefinedThreshold : public Error {
 public:
  using Error::Error;
};

/// hopf_data was called with q outside the HopfCritical band.
class NotAtHopf : public Error {
 public:
  using Error::Error;
};

/// The standing assumptions of the normal-form analysis do not hold.
class AssumptionViolated : public Error {
 public:
  using Error::Error;
};

/// Numerical failure: step-size underflow, cycle timeout and similar.
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

/// locate_threshold was given endpoints that classify identically.
class NoBracket : public Error {
 public:
  using Error::Error;
};

}  // namespace coop
