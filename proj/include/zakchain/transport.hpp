#pragma once

#include <functional>
#include <vector>

#include "zakchain/symmetry.hpp"

namespace zakchain {

/// Spectral form of the holonomy logarithm: X = vectors * diag(phases) *
/// vectors^dagger with phases in [0, 2*pi).
struct HolonomyLog {
  Matrix x;
  Matrix vectors;
  RealVector phases;
  double reconstruction = 0.0; // ||e^{iX} - input||
};

/// Hermitian logarithm of a unitary matrix with eigenphases fixed in
/// [0, 2*pi). Eigenphase clusters narrower than the cluster width are
/// treated as degenerate and assigned their joint circular-mean phase,
/// which keeps the result stable under tiny perturbations (including a
/// degenerate eigenvalue sitting at the branch point 1). The width defaults
/// to tol.phase_cluster; callers that know the accuracy of their input
/// (e.g. the transport integrator) may widen it. Throws ValidationError on
/// non-unitary input, NumericalError if e^{iX} fails to reproduce it.
HolonomyLog holonomy_log(const Matrix& unitary, const Tolerances& tol = {},
                         double cluster_width = -1.0);

/// Parallel transport of the occupied eigenprojection around the Brillouin
/// circle. Holds the sampled transport unitaries, the holonomy and its
/// logarithm, and the k = 0 eigenbasis (occupied columns first).
struct TransportResult {
  std::vector<double> grid;        // M+1 uniform samples of [0, 2*pi]
  std::vector<Matrix> transport;   // T at each grid sample, T_0 = Identity
  Matrix holonomy;                 // T at 2*pi
  HolonomyLog log;                 // X = -i ln(holonomy)
  Matrix initial_basis;            // eigenbasis of H_0, columns, occupied first
  RealVector initial_energies;
  int occupied_rank = 0;

  double unitarity_defect = 0.0;    // max over grid after re-unitarization
  double intertwining_defect = 0.0; // max ||P_k T_k - T_k P_0||
  double x_commutator = 0.0;        // ||[X, P_0]||

  int steps() const { return static_cast<int>(grid.size()) - 1; }

  /// P_0 from the occupied columns of the initial basis.
  Matrix initial_projector() const;

  /// e^{-i k X / 2 pi} evaluated from the stored spectral form.
  Matrix phase_twist(double k) const;

  /// Bloch basis V(k_i) = T_{k_i} e^{-i k_i X / 2 pi} V(0) at grid index i.
  Matrix bloch_basis(int index) const;

  /// Bloch basis at the grid sample nearest to k (k wrapped into [0, 2*pi]).
  Matrix bloch_basis_at(double k) const;
};

/// Generator data for the transport ODE at one quasi-momentum.
using ProjectorFamily = std::function<std::pair<Matrix, Matrix>(double)>;

/// Integrates dT/dk = [dP/dk, P] T, T(0) = Identity over [0, 2*pi] with M
/// uniform steps of classical fourth-order Runge-Kutta; every step is
/// re-unitarized by polar projection. The family callable returns (P, dP/dk)
/// at a given k. Generator evaluations on the half-step grid are
/// precomputed in parallel chunks; the recursion itself is sequential.
std::vector<Matrix> integrate_transport(const ProjectorFamily& family, int dim,
                                        int steps, double k_start = 0.0,
                                        Matrix start = Matrix(),
                                        Exec exec = Exec::Parallel);

/// Full transport pipeline for a gapped model: integration, holonomy
/// logarithm, initial basis and defect bookkeeping. Throws GaplessError on
/// gap closing, NumericalError on unitarity drift.
TransportResult parallel_transport(const HoppingModel& model, int steps = 2048,
                                   Exec exec = Exec::Parallel,
                                   const Tolerances& tol = {});

/// Ordered orthonormal eigenbasis of H_0, occupied columns first.
Matrix initial_basis(const HoppingModel& model, const Tolerances& tol = {});

/// Step count scaled for small gaps: the occupied projector varies on a
/// k-scale set by the gap, so the integration step shrinks with it.
int adaptive_transport_steps(int base, double min_abs_energy);

/// Defect summary for the three contract properties of parallel transport.
struct TransportReport {
  double unitarity_defect = 0.0;
  double intertwining_defect = 0.0;
  double telescopic_defect = 0.0; // ||T_{k+2pi} - T_k T_{2pi}||, extended run
};

TransportReport verify_transport(const TransportResult& tr,
                                 const HoppingModel& model,
                                 Exec exec = Exec::Parallel,
                                 const Tolerances& tol = {});

/// Per-operator outcome of checking the symmetric-Bloch-basis properties on
/// the transport basis.
struct SymmetricBasisCheck {
  SymLabel label = SymLabel::Custom;
  bool antiunitary = false;
  int energy_sign = +1;
  int momentum_sign = +1;
  int square = +1;              // only meaningful for antiunitary operators
  bool quaternionic_case = false;
  double transport_defect = 0.0; // ||O T_k -+ T_{+-k} O|| max over grid
  double vector_defect = 0.0;    // strict band pairing, up to recorded phases
  double pairing_defect = 0.0;   // as above but span-level inside degenerate clusters
  double subspace_defect = 0.0;  // occupied subspace mapped correctly
  std::vector<double> pair_phases; // recorded phase per band pair at k = 0
  bool passed = false;
};

struct SymmetricBasisReport {
  std::vector<SymmetricBasisCheck> checks;
  bool all_passed = true;
};

/// Verifies, for every declared and composite operator, the applicable
/// symmetric-basis transformation law on the transport basis, plus the
/// commutation of the operator with the transport unitaries. For a
/// quaternionic operator (antiunitary, square -1) only the subspace-level
/// statement is checked; the vector-level one fails by orthogonality and its
/// deviation is reported for reference.
SymmetricBasisReport verify_symmetric_basis(const TransportResult& tr,
                                            const SymmetrySet& set,
                                            int grid_points = 64,
                                            const Tolerances& tol = {});

} // namespace zakchain
