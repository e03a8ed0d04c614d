#pragma once

#include "zakchain/symmetry.hpp"

namespace zakchain {

/// Generalized Kitaev chain: the fiber Hamiltonian carries the scalar
/// off-diagonal block z(k) = sum_n c_n e^{i n k} with real coefficients.
struct KitaevSpec {
  std::map<int, double> coefficients;
};

/// Multichannel chain with m channels: off-diagonal block A_k =
/// sum_n A_n e^{i n k} with entrywise-real m x m coefficients.
struct MultichannelSpec {
  int channels = 1;
  std::map<int, RealMatrix> coefficients;
};

struct PresetModel {
  HoppingModel model;
  SymmetrySet symmetries;
};

/// N = 2 chain with T = K, C = sigma_3 K, S = sigma_3 (class BDI). The
/// coefficient c_n maps to the (0,1) entry of the hopping matrix at offset
/// -n; this fixes the winding orientation used throughout (the c_1-only
/// chain has winding +1).
PresetModel kitaev_chain(const KitaevSpec& spec);

/// N = 2m chain [[0, A_k], [A_k^dagger, 0]] with Sigma_3-block symmetry
/// operators (class BDI). Reduces to kitaev_chain at m = 1.
PresetModel multichannel_kitaev(const MultichannelSpec& spec);

/// Doubled model diag(H(k), conj(H(-k))) with the antiunitary
/// T = [[0, 1], [-1, 0]] K of square -1 across the two copies. The declared
/// set depends on the base: a BDI base doubles to DIII, a chiral-only base
/// to CII, a symmetry-free base to AII. The gap is preserved and
/// detect_quaternionic is true on the result. Throws NumericalError if the
/// constructed operators fail to verify against the doubled model.
PresetModel quaternionic_double(const HoppingModel& base,
                                const SymmetrySet& base_set,
                                const Tolerances& tol = {});

/// One gapped, verified representative model per tenfold-way class, built
/// from the Kitaev chain and its doublings. The AIII, BDI and D entries are
/// topologically nontrivial.
PresetModel class_representative(AZCLabel label, const Tolerances& tol = {});

} // namespace zakchain
