#pragma once

#include <optional>
#include <string>
#include <vector>

#include "zakchain/model.hpp"

namespace zakchain {

enum class SymLabel { T, C, S, TC, TS, CS, TCS, Custom };

std::string to_string(SymLabel label);

/// A discrete symmetry: a unitary matrix, optionally composed with entrywise
/// complex conjugation (antiunitary), together with its action on energy and
/// quasi-momentum. Antiunitary operators flip k; unitary ones fix it.
struct SymmetryOperator {
  SymLabel label = SymLabel::Custom;
  Matrix matrix;
  bool antiunitary = false;
  int energy_sign = +1;   // O H_k O^{-1} = energy_sign * H_{momentum_sign * k}
  int momentum_sign = +1;

  static SymmetryOperator time_reversal(Matrix u);  // antiunitary, E -> E
  static SymmetryOperator particle_hole(Matrix u);  // antiunitary, E -> -E
  static SymmetryOperator chiral(Matrix u);         // unitary, E -> -E

  /// Applies the operator to a vector: U v, or U conj(v) when antiunitary.
  Vector apply(const Vector& v) const;

  /// O A O^{-1} for a matrix A.
  Matrix conjugate_matrix(const Matrix& a) const;

  /// Checks unitarity of the linear part and the antiunitary/momentum-sign
  /// pairing; throws ValidationError on violation.
  void validate(const Tolerances& tol = {}) const;
};

/// +1 or -1 such that O^2 = sign * Identity (U conj(U) for antiunitary U K,
/// U^2 for unitary). Throws NumericalError if O^2 is not proportional to
/// +-Identity ("not an involution").
int square_sign(const SymmetryOperator& op, const Tolerances& tol = {});

/// Operator composition: apply b first, then a.
SymmetryOperator compose(const SymmetryOperator& a, const SymmetryOperator& b,
                         SymLabel label = SymLabel::Custom);

/// Outcome of a grid check of one operator relation against a model.
struct SymmetryVerification {
  SymLabel label = SymLabel::Custom;
  bool passed = false;
  double max_deviation = 0.0;
  double tolerance = 0.0;
};

/// Checks O H_k O^{-1} = energy_sign * H_{momentum_sign k} on a uniform grid.
SymmetryVerification verify_symmetry(const HoppingModel& model,
                                     const SymmetryOperator& op,
                                     int grid_points = 256,
                                     Exec exec = Exec::Parallel,
                                     const Tolerances& tol = {});

/// Checks O P_k^{(-)} = P^{(-sign)}_{momentum_sign k} O with the occupied
/// projector and its complement. Requires a gapped model.
SymmetryVerification verify_projector_relations(const HoppingModel& model,
                                                const SymmetryOperator& op,
                                                int grid_points = 128,
                                                Exec exec = Exec::Parallel,
                                                const Tolerances& tol = {});

enum class AZCLabel { A, AIII, AI, BDI, D, DIII, AII, CII, C, CI };
enum class KTheory1D { Zero, Z, Z2 };
enum class InvariantSupport { Zero, Z2 };

std::string to_string(AZCLabel label);
std::string to_string(KTheory1D k);
std::string to_string(InvariantSupport s);

/// One row of the tenfold-way table restricted to one spatial dimension.
struct AZCClass {
  AZCLabel label;
  KTheory1D k_theory_1d;
  InvariantSupport invariant_support;
};

/// The declared symmetry content of a model: any subset of {T, C, S}.
/// Composite operators (TC, TS, CS, TCS) are generated on demand by compose
/// rather than user-declared.
struct SymmetrySet {
  std::optional<SymmetryOperator> time_reversal;
  std::optional<SymmetryOperator> particle_hole;
  std::optional<SymmetryOperator> chiral;

  bool empty() const {
    return !time_reversal && !particle_hole && !chiral;
  }

  /// The composite for a label, if its factors are declared.
  std::optional<SymmetryOperator> composite(SymLabel label) const;

  /// Declared operators plus all derivable composites (TC, TS, CS).
  std::vector<SymmetryOperator> all_operators() const;

  /// Declared operators only.
  std::vector<SymmetryOperator> declared() const;
};

/// Maps the presence and squares of T, C, S onto the unique tenfold-way row.
/// When two of the three are declared the third is derived by composition;
/// when all three are declared, S must be proportional to T*C by a phase in
/// {+-1, +-i} (the accepted phase is reported via consistency_phase if
/// non-null). Throws SymmetryError on an inconsistent set.
AZCClass classify(const SymmetrySet& set, Complex* consistency_phase = nullptr,
                  const Tolerances& tol = {});

/// Result of scanning a set for a quaternionic structure.
struct QuaternionicWitness {
  bool present = false;
  SymLabel witness = SymLabel::Custom;
};

/// True iff some declared or composite antiunitary operator (T, C, TS or CS)
/// squares to -1.
QuaternionicWitness detect_quaternionic(const SymmetrySet& set,
                                        const Tolerances& tol = {});

struct QuaternionicDetReport {
  double det_deviation = 0.0;   // |det(U) - 1|
  bool spectrum_paired = false; // eigenvalues occur as conjugate pairs
  double commutation_defect = 0.0;
};

/// For a unitary U commuting with an antiunitary O with O^2 = -1: asserts
/// det(U) = 1 and conjugation-symmetric spectrum. Throws ValidationError if
/// the commutation precondition fails, NumericalError if det deviates.
QuaternionicDetReport quaternionic_det_check(const Matrix& u,
                                             const SymmetryOperator& o,
                                             const Tolerances& tol = {});

} // namespace zakchain
