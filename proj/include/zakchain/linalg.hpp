#pragma once

#include "zakchain/types.hpp"

namespace zakchain {

/// Unitary factor of the polar decomposition M = U * positive, via SVD.
Matrix polar_unitary(const Matrix& m);

/// Frobenius norm of U^dagger U - 1.
double unitarity_defect(const Matrix& u);

/// (M + M^dagger) / 2.
Matrix hermitize(const Matrix& m);

/// Wraps k into [0, 2*pi).
double wrap_to_period(double k);

/// Principal argument mapped to [0, 2*pi).
double phase_in_period(const Complex& z);

} // namespace zakchain
