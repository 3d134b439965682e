#pragma once

#include <stdexcept>
#include <string>

namespace radpress {

// Base for every error raised by the library. Subclasses name the contract
// that was violated so callers (and the CLI) can map them to exit codes.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Coincident transverse points (b = 0) where a closed form has a b^-5 pole.
class DegenerateSeparationError : public Error {
public:
  using Error::Error;
};

// Quadrature could not reach the requested accuracy, or the control block
// under-resolves the integrand.
class AccuracyError : public Error {
public:
  using Error::Error;
};

// Inputs outside the asymptotic regime an approximation is valid in.
class RegimeError : public Error {
public:
  using Error::Error;
};

class PreconditionError : public Error {
public:
  using Error::Error;
};

// Non-positive or otherwise out-of-domain physical inputs.
class DomainError : public Error {
public:
  using Error::Error;
};

// Pointwise two-point function requested on (or too near) the light cone.
class SingularSeparationError : public Error {
public:
  using Error::Error;
};

// A sample or mode violates a normalization / boundary contract.
class ContractError : public Error {
public:
  using Error::Error;
};

class InvalidCavityError : public Error {
public:
  using Error::Error;
};

class SearchError : public Error {
public:
  using Error::Error;
};

} // namespace radpress
