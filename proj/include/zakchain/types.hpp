#pragma once

#include <Eigen/Dense>
#include <complex>
#include <numbers>

namespace zakchain {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

inline constexpr double two_pi = 2.0 * std::numbers::pi;
inline constexpr double pi = std::numbers::pi;

/// Execution policy for the data-parallel grid kernels. Serial is the
/// reference path; Parallel runs the same per-point evaluation under OpenMP.
enum class Exec { Serial, Parallel };

} // namespace zakchain
