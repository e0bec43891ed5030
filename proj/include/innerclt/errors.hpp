#pragma once

#include <stdexcept>
#include <string>

namespace innerclt {

// Base for every domain error raised by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A Blaschke zero on or outside the unit circle (or past the construction cap).
struct ZeroOnBoundary : Error {
  using Error::Error;
};

// Degree-1 product with f(0)=0 is a rotation; excluded everywhere.
struct RotationInput : Error {
  using Error::Error;
};

// Two grid functions sampled on different grids.
struct GridMismatch : Error {
  using Error::Error;
};

// Requested frequency content exceeds what the quadrature grid resolves.
struct NyquistViolation : Error {
  using Error::Error;
};

struct LambdaNotContractive : Error {
  using Error::Error;
};

struct AllZero : Error {
  using Error::Error;
};

struct NonpositiveVariance : Error {
  using Error::Error;
};

struct EmptySample : Error {
  using Error::Error;
};

struct DeltaTooSmall : Error {
  using Error::Error;
};

struct DegenerateSigma : Error {
  using Error::Error;
};

// Too few grid points above the Monte Carlo noise floor to fit a rate.
struct NoiseFloor : Error {
  using Error::Error;
};

struct TruncationTooCoarse : Error {
  using Error::Error;
};

// Malformed config / report files.
struct ConfigError : Error {
  using Error::Error;
};

}  // namespace innerclt
