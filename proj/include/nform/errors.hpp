#pragma once

#include <stdexcept>
#include <string>

namespace nform {

/// Bad input data: dimension mismatches, malformed documents, invalid spectra.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical failure: singular or near-resonant solves, residual breaches,
/// closure violations.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// Default tolerances. All CLI-configurable; see io.hpp for the environment
// variable overrides.
inline constexpr double kDefaultTolRes = 1e-9;
inline constexpr double kDefaultTolCoeff = 1e-10;
inline constexpr double kDefaultTolRoundtrip = 1e-8;
inline constexpr double kDefaultCondLimit = 1e12;

}  // namespace nform
