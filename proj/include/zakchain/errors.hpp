#pragma once

#include <stdexcept>
#include <string>

namespace zakchain {

/// Invalid input: malformed files, non-Hermitian hopping data, dimension
/// mismatches, out-of-range configuration values.
class ValidationError : public std::runtime_error {
public:
  explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

/// The spectrum touches the Fermi level: an eigenvalue lies within eps_gap
/// of zero at some quasi-momentum.
class GaplessError : public std::runtime_error {
public:
  explicit GaplessError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A declared symmetry does not hold on the model within tolerance.
class SymmetryError : public std::runtime_error {
public:
  explicit SymmetryError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A numerical consistency check failed: cross-method disagreement, integer
/// rounding residual too large, unitarity drift, rank inconsistency.
class NumericalError : public std::runtime_error {
public:
  explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace zakchain
