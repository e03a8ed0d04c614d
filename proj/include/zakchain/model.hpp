#pragma once

#include <map>

#include "zakchain/errors.hpp"
#include "zakchain/tolerances.hpp"
#include "zakchain/types.hpp"

namespace zakchain {

/// Finite-range translation-invariant tight-binding Hamiltonian on a 1D
/// chain with N internal components: (H psi)_n = sum_j A_j psi_{n+j}.
/// Self-adjointness requires A_{-j} = A_j^dagger; offsets beyond the range R
/// are zero. Immutable after construction and safe to share across threads.
class HoppingModel {
public:
  /// Validates and stores the hopping family. If only one of the offsets
  /// +-j is given, the partner is filled in as the conjugate transpose; if
  /// both are given they must match within tol.herm.
  HoppingModel(int internal_dim, int range, std::map<int, Matrix> hoppings,
               const Tolerances& tol = {});

  int internal_dim() const { return internal_dim_; }
  int range() const { return range_; }
  const std::map<int, Matrix>& hoppings() const { return hoppings_; }

  /// Hopping matrix for offset j (zero matrix if absent).
  Matrix hopping(int j) const;

  /// Scale estimate max_k ||H_k||_F, used for relative tolerances.
  double norm_scale() const { return norm_scale_; }

private:
  int internal_dim_;
  int range_;
  std::map<int, Matrix> hoppings_;
  double norm_scale_;
};

/// Eigen-decomposition of one fiber Hamiltonian. Eigenvalues ascending;
/// eigenvector columns orthonormal and phase-fixed (the first component of
/// largest modulus is real positive) so output is deterministic.
struct SpectralData {
  double k = 0.0;
  RealVector eigenvalues;
  Matrix eigenvectors; // column i belongs to eigenvalues[i]
};

/// Result of scanning the spectral gap around zero energy.
struct GapReport {
  double gap_width = 0.0;      // 2 x min over the grid of min_i |E_i(k)|
  double min_abs_energy = 0.0;
  double k_at_min = 0.0;
  int occupied_rank = 0;       // number of negative bands (constant if gapped)
  bool gapped = false;
};

/// H_k = sum_j e^{-i j k} A_j. Hermitian, 2*pi-periodic, trigonometric of
/// degree <= R in k.
Matrix fiber_hamiltonian(const HoppingModel& model, double k);

/// Analytic derivative d/dk H_k = sum_j (-i j) e^{-i j k} A_j (Hermitian).
Matrix fiber_derivative(const HoppingModel& model, double k);

SpectralData spectrum(const HoppingModel& model, double k,
                      const Tolerances& tol = {});

/// Scans a uniform k-grid (with one x8 refinement pass around the minimizer)
/// for the smallest |eigenvalue|. Throws NumericalError if the occupied rank
/// changes across the grid while the model looks gapped.
GapReport gap_at_zero(const HoppingModel& model, int grid_points = 1024,
                      Exec exec = Exec::Parallel, const Tolerances& tol = {});

/// Orthogonal projector onto the negative-energy eigenspaces of H_k.
/// Throws GaplessError if any |E| <= tol.gap at this k.
Matrix occupied_projector(const HoppingModel& model, double k,
                          const Tolerances& tol = {});

/// d/dk of the occupied projector via the first-order perturbation sum over
/// occupied/unoccupied pairs; needs only spectral data and the analytic
/// fiber derivative, so it is free of eigenvector gauge ambiguity.
Matrix projector_derivative(const HoppingModel& model, double k,
                            const Tolerances& tol = {});

/// Occupied projector and its k-derivative from a single eigensolve.
std::pair<Matrix, Matrix> projector_with_derivative(const HoppingModel& model,
                                                    double k,
                                                    const Tolerances& tol = {});

/// Band energies over a uniform k-grid on [0, 2*pi); one eigensolve per
/// point, parallelizable.
std::vector<std::pair<double, RealVector>> band_structure(
    const HoppingModel& model, int grid_points, Exec exec = Exec::Parallel,
    const Tolerances& tol = {});

} // namespace zakchain
