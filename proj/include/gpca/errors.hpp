#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gpca {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid objective/kernel/mode parameters or malformed grammar strings.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Non-finite or otherwise unusable input data.
class DataError : public Error {
 public:
  using Error::Error;
};

/// Mismatched vector or matrix sizes.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// The iteration reached a point that carries no usable direction
/// (zero gradient sum, zero dataset, non-positive cᵀKc, ...).
class DegenerateError : public Error {
 public:
  using Error::Error;
};

/// Deflated data ran out of energy before the requested number of vectors.
class RankDeficiencyError : public Error {
 public:
  RankDeficiencyError(const std::string& what, std::size_t obtained)
      : Error(what), obtained_(obtained) {}

  std::size_t obtained() const noexcept { return obtained_; }

 private:
  std::size_t obtained_;
};

/// Kernel deflation with a component of (numerically) zero energy.
class DeflationError : public Error {
 public:
  using Error::Error;
};

/// Dataset or model file could not be parsed.
class LoadError : public Error {
 public:
  using Error::Error;
};

/// Invariant broken by round-off beyond tolerance.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

}  // namespace gpca
