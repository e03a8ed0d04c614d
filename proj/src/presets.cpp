#include "zakchain/presets.hpp"

#include <cmath>

namespace zakchain {

namespace {

Matrix sigma3_blocks(int m) {
  Matrix s = Matrix::Zero(2 * m, 2 * m);
  s.topLeftCorner(m, m) = Matrix::Identity(m, m);
  s.bottomRightCorner(m, m) = -Matrix::Identity(m, m);
  return s;
}

SymmetrySet bdi_set(int m) {
  SymmetrySet set;
  set.time_reversal = SymmetryOperator::time_reversal(Matrix::Identity(2 * m, 2 * m));
  set.particle_hole = SymmetryOperator::particle_hole(sigma3_blocks(m));
  set.chiral = SymmetryOperator::chiral(sigma3_blocks(m));
  return set;
}

void require_verified(const HoppingModel& model, const SymmetrySet& set,
                      const Tolerances& tol) {
  for (const SymmetryOperator& op : set.declared()) {
    SymmetryVerification v = verify_symmetry(model, op, 128, Exec::Serial, tol);
    if (!v.passed)
      throw NumericalError("constructed preset fails symmetry verification for " +
                           to_string(op.label));
  }
}

/// Normalizes a unitary chiral candidate so it squares to +1.
SymmetryOperator normalized_chiral(SymmetryOperator op, const Tolerances& tol) {
  op.label = SymLabel::S;
  op.antiunitary = false;
  op.energy_sign = -1;
  op.momentum_sign = +1;
  if (square_sign(op, tol) == -1) op.matrix *= Complex(0.0, 1.0);
  return op;
}

struct DoubledPieces {
  HoppingModel model;
  Matrix j;                       // block [[0, 1], [-1, 0]]: T = j K, T^2 = -1
  std::optional<Matrix> s_nat;    // diag(U_S, conj U_S) if the base is chiral
  std::optional<Matrix> j_prime;  // [[0, conj U_S], [-U_S, 0]]: C = j' K, C^2 = -1
};

/// diag(H(k), conj(H(-k))) in hopping-matrix form, with the operator
/// building blocks the class constructions below pick from.
DoubledPieces double_model(const HoppingModel& base, const SymmetrySet& base_set,
                           const Tolerances& tol) {
  const int n = base.internal_dim();
  std::map<int, Matrix> hoppings;
  for (const auto& [j, a] : base.hoppings()) {
    Matrix hop = Matrix::Zero(2 * n, 2 * n);
    hop.topLeftCorner(n, n) = a;
    hop.bottomRightCorner(n, n) = a.conjugate();
    hoppings[j] = hop;
  }

  Matrix j_matrix = Matrix::Zero(2 * n, 2 * n);
  j_matrix.topRightCorner(n, n) = Matrix::Identity(n, n);
  j_matrix.bottomLeftCorner(n, n) = -Matrix::Identity(n, n);

  DoubledPieces out{HoppingModel(2 * n, base.range(), std::move(hoppings), tol),
                    std::move(j_matrix), std::nullopt, std::nullopt};
  if (base_set.chiral) {
    const Matrix& us = base_set.chiral->matrix;
    Matrix s_nat = Matrix::Zero(2 * n, 2 * n);
    s_nat.topLeftCorner(n, n) = us;
    s_nat.bottomRightCorner(n, n) = us.conjugate();
    Matrix j_prime = Matrix::Zero(2 * n, 2 * n);
    j_prime.topRightCorner(n, n) = us.conjugate();
    j_prime.bottomLeftCorner(n, n) = -us;
    out.s_nat = std::move(s_nat);
    out.j_prime = std::move(j_prime);
  }
  return out;
}

} // namespace

PresetModel kitaev_chain(const KitaevSpec& spec) {
  MultichannelSpec mc;
  mc.channels = 1;
  for (const auto& [n, c] : spec.coefficients) {
    RealMatrix a(1, 1);
    a(0, 0) = c;
    mc.coefficients[n] = a;
  }
  return multichannel_kitaev(mc);
}

PresetModel multichannel_kitaev(const MultichannelSpec& spec) {
  const int m = spec.channels;
  if (m < 1) throw ValidationError("multichannel preset needs at least one channel");
  int range = 0;
  for (const auto& [n, a] : spec.coefficients) {
    if (a.rows() != m || a.cols() != m)
      throw ValidationError("multichannel coefficient has wrong dimension");
    range = std::max(range, std::abs(n));
  }

  // The coefficient A_n feeds the hopping matrix at offset -n, which makes
  // the upper-right block of H_k equal to sum_n A_n e^{+ink}. This mapping
  // fixes the winding orientation used throughout.
  std::map<int, Matrix> hoppings;
  for (const auto& [n, a] : spec.coefficients) {
    Matrix hop = hoppings.count(-n) ? hoppings[-n] : Matrix::Zero(2 * m, 2 * m);
    hop.block(0, m, m, m) += a.cast<Complex>();
    hoppings[-n] = hop;
    Matrix partner = hoppings.count(n) ? hoppings[n] : Matrix::Zero(2 * m, 2 * m);
    partner.block(m, 0, m, m) += a.transpose().cast<Complex>();
    hoppings[n] = partner;
  }
  return {HoppingModel(2 * m, range, std::move(hoppings)), bdi_set(m)};
}

PresetModel quaternionic_double(const HoppingModel& base,
                                const SymmetrySet& base_set,
                                const Tolerances& tol) {
  DoubledPieces pieces = double_model(base, base_set, tol);

  SymmetrySet set;
  set.time_reversal = SymmetryOperator::time_reversal(pieces.j);

  if (base_set.time_reversal && base_set.particle_hole) {
    // BDI-style base: the doubled particle hole diag(U_C, U_C^dagger) K
    // keeps its square; the chiral operator is then the normalized product
    // T C, which keeps the declared triple consistent. Result: DIII.
    const int n = base.internal_dim();
    const Matrix& uc = base_set.particle_hole->matrix;
    Matrix c_matrix = Matrix::Zero(2 * n, 2 * n);
    c_matrix.topLeftCorner(n, n) = uc;
    c_matrix.bottomRightCorner(n, n) = uc.adjoint();
    set.particle_hole = SymmetryOperator::particle_hole(std::move(c_matrix));
    set.chiral = normalized_chiral(
        compose(*set.time_reversal, *set.particle_hole, SymLabel::S), tol);
  } else if (base_set.chiral) {
    // Chiral-only base: keep the natural doubled chiral and derive the
    // particle hole as T S, which squares to -1. Result: CII.
    set.chiral = SymmetryOperator::chiral(*pieces.s_nat);
    SymmetryOperator derived = compose(*set.time_reversal, *set.chiral, SymLabel::C);
    derived.label = SymLabel::C;
    set.particle_hole = std::move(derived);
  }
  // Symmetry-free base: T alone. Result: AII.

  require_verified(pieces.model, set, tol);
  return {std::move(pieces.model), std::move(set)};
}

PresetModel class_representative(AZCLabel label, const Tolerances& tol) {
  const Complex i(0.0, 1.0);

  // Gapped N = 2 chain with no declared symmetry.
  auto make_class_a = [&]() {
    std::map<int, Matrix> hoppings;
    Matrix a0(2, 2), a1(2, 2);
    a0 << Complex(1.1, 0.0), Complex(0.2, 0.1), Complex(0.2, -0.1), Complex(-0.9, 0.0);
    a1 << Complex(0.15, 0.0), Complex(0.03, 0.02), Complex(0.01, -0.05), Complex(-0.08, 0.0);
    hoppings[0] = a0;
    hoppings[1] = a1;
    return PresetModel{HoppingModel(2, 1, std::move(hoppings), tol), SymmetrySet{}};
  };

  // Chiral chain with one complex coefficient: z(k) = 0.4 + i e^{ik}, which
  // breaks T and C but keeps S = sigma_3; winding 1.
  auto make_aiii = [&]() {
    std::map<int, Matrix> hoppings;
    Matrix a0(2, 2), am1(2, 2);
    a0 << 0.0, Complex(0.4, 0.0), Complex(0.4, 0.0), 0.0;
    am1 << 0.0, i, 0.0, 0.0;
    hoppings[0] = a0;
    hoppings[-1] = am1;
    SymmetrySet set;
    set.chiral = SymmetryOperator::chiral(sigma3_blocks(1));
    return PresetModel{HoppingModel(2, 1, std::move(hoppings), tol), std::move(set)};
  };

  auto make_bdi = [&]() { return kitaev_chain({{{0, 0.5}, {1, 1.0}}}); };

  switch (label) {
    case AZCLabel::A:
      return make_class_a();
    case AZCLabel::AIII:
      return make_aiii();
    case AZCLabel::AI: {
      // Real hopping matrices; only T = K declared.
      std::map<int, Matrix> hoppings;
      Matrix a0(2, 2), a1(2, 2);
      a0 << 1.0, 0.3, 0.3, -1.2;
      a1 << 0.2, 0.1, 0.05, -0.1;
      hoppings[0] = a0;
      hoppings[1] = a1;
      SymmetrySet set;
      set.time_reversal = SymmetryOperator::time_reversal(Matrix::Identity(2, 2));
      return {HoppingModel(2, 1, std::move(hoppings), tol), std::move(set)};
    }
    case AZCLabel::BDI:
      return make_bdi();
    case AZCLabel::D: {
      PresetModel preset = make_bdi();
      SymmetrySet set;
      set.particle_hole = preset.symmetries.particle_hole;
      return {std::move(preset.model), std::move(set)};
    }
    case AZCLabel::DIII: {
      PresetModel base = make_bdi();
      return quaternionic_double(base.model, base.symmetries, tol);
    }
    case AZCLabel::AII: {
      PresetModel base = make_class_a();
      return quaternionic_double(base.model, base.symmetries, tol);
    }
    case AZCLabel::CII: {
      PresetModel base = make_aiii();
      return quaternionic_double(base.model, base.symmetries, tol);
    }
    case AZCLabel::C: {
      // Only the square -1 particle hole [[0, U_S], [-U_S, 0]] K of the
      // doubled chain is declared.
      PresetModel base = make_bdi();
      DoubledPieces pieces = double_model(base.model, base.symmetries, tol);
      SymmetrySet set;
      set.particle_hole = SymmetryOperator::particle_hole(*pieces.j_prime);
      require_verified(pieces.model, set, tol);
      return {std::move(pieces.model), std::move(set)};
    }
    case AZCLabel::CI: {
      // Real doubled hoppings admit plain conjugation as a +1 time reversal;
      // combined with the square -1 particle hole this realizes CI.
      PresetModel base = make_bdi();
      DoubledPieces pieces = double_model(base.model, base.symmetries, tol);
      const int nn = pieces.model.internal_dim();
      SymmetrySet set;
      set.time_reversal = SymmetryOperator::time_reversal(Matrix::Identity(nn, nn));
      set.particle_hole = SymmetryOperator::particle_hole(*pieces.j_prime);
      set.chiral = normalized_chiral(
          compose(*set.time_reversal, *set.particle_hole, SymLabel::S), tol);
      require_verified(pieces.model, set, tol);
      return {std::move(pieces.model), std::move(set)};
    }
  }
  throw ValidationError("unknown symmetry class label");
}

} // namespace zakchain
