#pragma once

#include <map>
#include <optional>
#include <span>

#include "zakchain/transport.hpp"

namespace zakchain {

/// Zak phases of the transport basis, each evaluated two ways: from the
/// trace of the holonomy logarithm and from the discretized Wilson loop
/// (gauge-robust overlap products along the grid).
struct ZakPhases {
  double total_trace = 0.0;      // -tr(X) / 2 pi
  double total_wilson = 0.0;
  double occupied_trace = 0.0;   // -tr(X P_0) / 2 pi
  double occupied_wilson = 0.0;
};

ZakPhases zak_phases(const TransportResult& tr, const Tolerances& tol = {});

/// -tr(X)/2pi, cross-checked against the all-band Wilson loop within
/// tol.zak (NumericalError on disagreement). Integer up to integration error.
double zak_phase_total(const TransportResult& tr, const Tolerances& tol = {});

/// -tr(X P_0)/2pi, requiring ||[X, P_0]|| < tol.intw, cross-checked against
/// the occupied-band Wilson loop.
double zak_phase_occupied(const TransportResult& tr, const Tolerances& tol = {});

enum class Z2Value { Zero, One, NotApplicable };

std::string to_string(Z2Value v);

/// round(2 x occupied Zak) mod 2 for classes outside {A, AI, AII};
/// NotApplicable otherwise. Under a quaternionic structure the value is
/// additionally asserted to vanish.
Z2Value z2_invariant(const SymmetrySet& set, const TransportResult& tr,
                     const Tolerances& tol = {});

/// Winding number of a closed loop of nonzero complex samples (first and
/// last within tol.loop). Refuses undersampled loops (a successive phase
/// jump of pi/2 or more) and zero samples.
int winding_scalar(std::span<const Complex> samples, const Tolerances& tol = {});

/// Winding of det along a closed loop of unitary matrices.
int winding_unitary(std::span<const Matrix> samples, const Tolerances& tol = {});

/// Winding of z(k) = sum_n c_n e^{i n k} around the origin, computed by
/// phase-unwrapped sampling and independently by counting roots of the
/// associated polynomial inside the unit disk; the two must agree.
int kitaev_winding(const std::map<int, double>& coefficients,
                   const Tolerances& tol = {});

/// Winding of k -> det(A_k) for a multichannel model H_k = [[0, A_k],
/// [A_k^dagger, 0]]; verified against the winding of the polar-normalized
/// unitary loop U_k = A_k (A_k^dagger A_k)^{-1/2}.
int multichannel_winding(const HoppingModel& model, int grid_points = 4096,
                         const Tolerances& tol = {});

/// Outcome of recomputing the Zak phase in a gauge-transformed basis.
struct GaugeShiftReport {
  int gauge_winding = 0;
  double zak_before = 0.0;
  double zak_after = 0.0;
  double shift_residual = 0.0;     // |Delta Zak - winding|
  bool checked_compatibility = false;
  bool symmetry_compatible = false;
};

/// Applies a closed loop of block-diagonal gauges B_k (samples on the
/// transport grid, one per grid point) to the transport basis and asserts
/// that the total Zak phase shifts by exactly the winding number of B. When
/// a declared energy-sign -1 operator commutes with the gauge loop, the
/// winding is additionally asserted to be even.
GaugeShiftReport gauge_shift_check(const TransportResult& tr,
                                   std::span<const Matrix> gauge,
                                   const SymmetrySet* set = nullptr,
                                   const Tolerances& tol = {});

/// Everything the invariant pipeline produces for one model.
struct InvariantReport {
  AZCClass azc_class{AZCLabel::A, KTheory1D::Zero, InvariantSupport::Zero};
  QuaternionicWitness quaternionic;
  GapReport gap;
  std::vector<SymmetryVerification> symmetry_checks;
  std::vector<SymmetryVerification> projector_checks;
  ZakPhases zak;
  Z2Value z2 = Z2Value::NotApplicable;
  std::optional<int> oracle_winding;
  std::optional<bool> parity_consistent;
  // diagnostics
  int transport_steps = 0;
  int gap_grid = 0;
  double unitarity_defect = 0.0;
  double intertwining_defect = 0.0;
  double holonomy_reconstruction = 0.0;
  double x_commutator = 0.0;
};

struct InvariantOptions {
  int transport_steps = 2048;
  int gap_grid = 1024;
  int symmetry_grid = 256;
  Exec exec = Exec::Parallel;
};

/// Kitaev-form coefficients c_n when the model has the scalar off-diagonal
/// block structure with real coefficients.
std::optional<std::map<int, double>> detect_kitaev_form(const HoppingModel& model,
                                                        double tol = 1e-12);

/// True when the model has the block structure [[0, A_k], [A_k^dagger, 0]]
/// with entrywise-real Fourier coefficients A_n.
bool detect_multichannel_form(const HoppingModel& model, double tol = 1e-12);

/// Full pipeline: gap scan, symmetry verification, classification,
/// transport, Zak phases, Z2 invariant and (for Kitaev-type models) the
/// independent winding oracle. Throws GaplessError when the gap closes and
/// SymmetryError when a declared symmetry fails to verify.
InvariantReport compute_invariants(const HoppingModel& model,
                                   const SymmetrySet& set,
                                   const InvariantOptions& options = {},
                                   const Tolerances& tol = {});

} // namespace zakchain
