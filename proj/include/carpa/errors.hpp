#pragma once

#include <stdexcept>
#include <string>

namespace carpa {

/// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionMismatch : Error {
  using Error::Error;
};

struct ParameterOutOfRange : Error {
  using Error::Error;
};

struct RankDeficient : Error {
  using Error::Error;
};

struct NotPositiveDefinite : Error {
  using Error::Error;
};

struct UnsupportedSet : Error {
  using Error::Error;
};

struct NotOrthonormal : Error {
  using Error::Error;
};

struct NoFriedrichsAngle : Error {
  using Error::Error;
};

struct DegenerateAngle : Error {
  using Error::Error;
};

struct InsufficientData : Error {
  using Error::Error;
};

/// Signals that a step map hit an exact fixed point (zero displacement).
/// The iteration driver treats this as convergence, not failure.
struct FixedPointReached : Error {
  using Error::Error;
};

} // namespace carpa
