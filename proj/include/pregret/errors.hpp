#pragma once

#include <stdexcept>
#include <string>

namespace pregret {

// Base class for all library errors. Subclasses distinguish caller mistakes
// (bad input, unsupported combination) from structural failures (infeasible
// pair, non-invertible curve) so callers can react per kind.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InputError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

// Requested pair distance is unreachable along the given chord.
class InfeasiblePairError : public Error {
 public:
  using Error::Error;
};

// A combinatorial sweep would exceed the configured budget cap.
class BudgetError : public Error {
 public:
  using Error::Error;
};

// No closed form (or other capability) exists for the requested combination.
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

// A quantity required to be positive is numerically zero.
class DegenerateError : public Error {
 public:
  using Error::Error;
};

// Modulus curve is not strictly increasing, so it has no inverse.
class NonInvertibleError : public Error {
 public:
  using Error::Error;
};

}  // namespace pregret
