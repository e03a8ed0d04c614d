#pragma once

#include <algorithm>

namespace zakchain {

/// Numerical tolerances used across the toolkit. Defaults are sized for
/// double-precision dense solves at internal dimension N <= 64. Every field
/// can be overridden from the CLI.
struct Tolerances {
  double herm = 1e-10;          ///< input validation of hopping matrices
  double eig_rel = 1e-8;        ///< eigen-residuals, x max(1, ||H_k||)
  double proj = 1e-8;           ///< projector idempotence/hermiticity, unitarity of operators
  double gap = 1e-8;            ///< eps_gap: |E| below this counts as gap closing
  double sym_rel = 1e-8;        ///< operator-relation checks, x max(1, ||H||)
  double unit = 1e-8;           ///< unitarity of transport/holonomy matrices
  double intw = 1e-6;           ///< intertwining and [X, P_0] commutator defects
  double zak = 1e-5;            ///< trace formula vs Wilson-loop agreement
  double integer = 1e-3;        ///< integer rounding residuals
  double loop = 1e-8;           ///< loop closure for winding numbers
  double phase_cluster = 1e-8;  ///< eigenphases closer than this are degenerate

  double eig(double h_norm) const { return eig_rel * std::max(1.0, h_norm); }
  double sym(double h_norm) const { return sym_rel * std::max(1.0, h_norm); }
};

} // namespace zakchain
