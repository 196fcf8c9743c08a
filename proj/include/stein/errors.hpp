#pragma once

#include <stdexcept>
#include <string>

namespace stein {

// Base for all library failures. Subtypes name the contract that was broken.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct DimensionMismatch : Error {
  using Error::Error;
};

// Matrix has an eigenvalue below -floor.
struct NotPsd : Error {
  using Error::Error;
};

// Inverse or inverse square root requested from a singular matrix.
struct Singular : Error {
  using Error::Error;
};

// Richardson levels of a finite-difference stencil disagree beyond tolerance.
struct DerivativeUnstable : Error {
  using Error::Error;
};

// Doubling quadrature nodes moved the result by more than the requested tol.
struct QuadratureDiverged : Error {
  using Error::Error;
};

struct EnumerationTooLarge : Error {
  using Error::Error;
};

struct MissingLambda : Error {
  using Error::Error;
};

struct MissingSeminorm : Error {
  using Error::Error;
};

struct SingularSigma : Error {
  using Error::Error;
};

// An epsilon-extrapolation or sampling loop failed to contract.
struct NoConvergence : Error {
  using Error::Error;
};

struct ConfigInvalid : Error {
  using Error::Error;
};

struct IoFailure : Error {
  using Error::Error;
};

}  // namespace stein
