#pragma once

#include <stdexcept>
#include <string>

namespace plasmonq {

// Exception families map onto distinct CLI exit codes (see tools/plasmonq.cpp).

/// Invalid configuration or parameters that violate a documented invariant.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Input data that is malformed, out of range, or insufficient for an analysis.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Wavelength outside the span of a tabulated material.
class RangeError : public DataError {
 public:
  RangeError(const std::string& what, double wavelength_nm)
      : DataError(what), wavelength_nm_(wavelength_nm) {}
  double wavelength_nm() const noexcept { return wavelength_nm_; }

 private:
  double wavelength_nm_;
};

/// Too few distinct settings / records for the requested estimate.
class InsufficientDataError : public DataError {
 public:
  using DataError::DataError;
};

/// A numerical procedure could not produce a meaningful result.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace plasmonq
