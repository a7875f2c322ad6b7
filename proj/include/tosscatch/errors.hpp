#pragma once

#include <stdexcept>
#include <string>

namespace tosscatch {

/// Base class for every numeric failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the domain of a map or formula (x outside [0,1], log of a
/// nonpositive number, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Formula has a pole at the requested parameter (gamma = 0, beta = 1).
class SingularityError : public Error {
 public:
  using Error::Error;
};

/// Logistic period-2 orbit requested below its birth at beta = 3.
class NoRealOrbitError : public Error {
 public:
  using Error::Error;
};

/// Parameter at which the requested structure degenerates (tent mu = 1,
/// coincident points).
class DegenerateParameterError : public Error {
 public:
  using Error::Error;
};

/// Derived map parameter leaves its admissible range.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// A simulated iterate left [0,1].
class EscapeError : public Error {
 public:
  using Error::Error;
};

class SingularDerivativeError : public Error {
 public:
  using Error::Error;
};

/// Finite set fails the forward-invariance check.
class InvarianceError : public Error {
 public:
  using Error::Error;
};

/// Markov chain has more than one stationary distribution.
class NonUniqueStationaryError : public Error {
 public:
  using Error::Error;
};

}  // namespace tosscatch
