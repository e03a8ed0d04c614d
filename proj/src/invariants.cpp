#include "zakchain/invariants.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "zakchain/linalg.hpp"

namespace zakchain {

std::string to_string(Z2Value v) {
  switch (v) {
    case Z2Value::Zero: return "0";
    case Z2Value::One: return "1";
    case Z2Value::NotApplicable: return "n/a";
  }
  return "?";
}

namespace {

// Discrete Berry phase of the first `cols` basis columns along the transport
// grid: (1/2pi) sum_i arg det(V_i^dagger V_{i+1}).
double wilson_zak(const TransportResult& tr, int cols) {
  double total = 0.0;
  Matrix prev = tr.bloch_basis(0).leftCols(cols);
  for (int i = 1; i <= tr.steps(); ++i) {
    Matrix cur = tr.bloch_basis(i).leftCols(cols);
    total += std::arg((prev.adjoint() * cur).determinant());
    prev = cur;
  }
  return total / two_pi;
}

} // namespace

ZakPhases zak_phases(const TransportResult& tr, const Tolerances& tol) {
  ZakPhases z;
  z.total_trace = -tr.log.phases.sum() / two_pi;
  z.occupied_trace = -(tr.log.x * tr.initial_projector()).trace().real() / two_pi;
  z.total_wilson = wilson_zak(tr, tr.initial_basis.cols());
  z.occupied_wilson = wilson_zak(tr, tr.occupied_rank);
  (void)tol;
  return z;
}

double zak_phase_total(const TransportResult& tr, const Tolerances& tol) {
  ZakPhases z = zak_phases(tr, tol);
  if (std::abs(z.total_trace - z.total_wilson) > tol.zak) {
    std::ostringstream os;
    os << "total Zak phase: trace formula " << z.total_trace
       << " disagrees with Wilson loop " << z.total_wilson;
    throw NumericalError(os.str());
  }
  return z.total_trace;
}

double zak_phase_occupied(const TransportResult& tr, const Tolerances& tol) {
  if (tr.x_commutator > tol.intw)
    throw NumericalError("[X, P_0] commutator defect too large for the occupied trace formula");
  ZakPhases z = zak_phases(tr, tol);
  if (std::abs(z.occupied_trace - z.occupied_wilson) > tol.zak) {
    std::ostringstream os;
    os << "occupied Zak phase: trace formula " << z.occupied_trace
       << " disagrees with Wilson loop " << z.occupied_wilson;
    throw NumericalError(os.str());
  }
  return z.occupied_trace;
}

Z2Value z2_invariant(const SymmetrySet& set, const TransportResult& tr,
                     const Tolerances& tol) {
  AZCClass cls = classify(set, nullptr, tol);
  if (cls.label == AZCLabel::A || cls.label == AZCLabel::AI ||
      cls.label == AZCLabel::AII)
    return Z2Value::NotApplicable;

  double doubled = 2.0 * zak_phase_occupied(tr, tol);
  long rounded = std::lround(doubled);
  if (std::abs(doubled - rounded) > tol.integer) {
    std::ostringstream os;
    os << "2 x occupied Zak phase " << doubled
       << " is not an integer within tolerance";
    throw NumericalError(os.str());
  }
  int z2 = static_cast<int>(((rounded % 2) + 2) % 2);
  if (detect_quaternionic(set, tol).present && z2 == 1)
    throw NumericalError(
        "nonzero Z2 invariant in presence of a quaternionic structure; "
        "this signals a bug or an unverified symmetry");
  return z2 ? Z2Value::One : Z2Value::Zero;
}

int winding_scalar(std::span<const Complex> samples, const Tolerances& tol) {
  if (samples.size() < 8) throw ValidationError("winding needs at least 8 samples");
  double scale = std::abs(samples.front());
  if (std::abs(samples.front() - samples.back()) > tol.loop * std::max(1.0, scale))
    throw ValidationError("loop is not closed (first and last samples differ)");
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
    if (std::abs(samples[i]) == 0.0)
      throw ValidationError("winding undefined: zero sample in the loop");
    double jump = std::arg(samples[i + 1] / samples[i]);
    if (std::abs(jump) >= pi / 2.0)
      throw NumericalError("loop undersampled: successive phase jump >= pi/2");
    total += jump;
  }
  double w = total / two_pi;
  long rounded = std::lround(w);
  if (std::abs(w - rounded) > tol.integer)
    throw NumericalError("winding rounding residual too large");
  return static_cast<int>(rounded);
}

int winding_unitary(std::span<const Matrix> samples, const Tolerances& tol) {
  std::vector<Complex> dets;
  dets.reserve(samples.size());
  for (const Matrix& u : samples) {
    if (unitarity_defect(u) > tol.unit)
      throw ValidationError("winding_unitary: sample is not unitary within tolerance");
    dets.push_back(u.determinant());
  }
  return winding_scalar(dets, tol);
}

namespace {

std::vector<Complex> companion_roots(const std::vector<Complex>& monic) {
  // monic: coefficients a_0 .. a_{d-1} of w^d + a_{d-1} w^{d-1} + ... + a_0.
  const int d = static_cast<int>(monic.size());
  Matrix companion = Matrix::Zero(d, d);
  for (int i = 1; i < d; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < d; ++i) companion(i, d - 1) = -monic[i];
  Eigen::ComplexEigenSolver<Matrix> solver(companion, false);
  return {solver.eigenvalues().data(), solver.eigenvalues().data() + d};
}

int kitaev_winding_by_sampling(const std::map<int, double>& coeffs,
                               const Tolerances& tol) {
  for (int grid = 1024; grid <= (1 << 17); grid *= 2) {
    std::vector<Complex> samples(grid + 1);
    double min_abs = 1e300;
    for (int i = 0; i <= grid; ++i) {
      double k = two_pi * i / grid;
      Complex z = 0.0;
      for (const auto& [n, c] : coeffs) z += c * std::exp(Complex(0.0, n * k));
      samples[i] = z;
      min_abs = std::min(min_abs, std::abs(z));
    }
    if (min_abs <= tol.gap)
      throw GaplessError("z(k) vanishes on the circle; winding undefined");
    bool ok = true;
    for (int i = 0; i < grid; ++i) {
      if (std::abs(std::arg(samples[i + 1] / samples[i])) >= pi / 2.0) {
        ok = false;
        break;
      }
    }
    if (ok) return winding_scalar(samples, tol);
  }
  throw NumericalError("z(k) loop cannot be sampled densely enough");
}

int kitaev_winding_by_roots(const std::map<int, double>& coeffs,
                            const Tolerances& tol) {
  // z(k) = w^{n_min} q(w) on |w| = 1 with q(0) != 0; the winding is n_min
  // plus the number of roots of q inside the unit disk.
  double max_coeff = 0.0;
  for (const auto& [n, c] : coeffs) max_coeff = std::max(max_coeff, std::abs(c));
  if (max_coeff == 0.0) throw GaplessError("all coefficients vanish");
  int n_min = 0, n_max = 0;
  bool found = false;
  for (const auto& [n, c] : coeffs) {
    if (std::abs(c) <= 1e-14 * max_coeff) continue;
    if (!found) {
      n_min = n_max = n;
      found = true;
    } else {
      n_min = std::min(n_min, n);
      n_max = std::max(n_max, n);
    }
  }
  const int degree = n_max - n_min;
  if (degree == 0) return n_min;

  std::vector<Complex> monic(degree);
  double lead = coeffs.at(n_max);
  for (int i = 0; i < degree; ++i) {
    auto it = coeffs.find(n_min + i);
    double c = (it != coeffs.end() && std::abs(it->second) > 1e-14 * max_coeff)
                   ? it->second
                   : 0.0;
    monic[i] = Complex(c / lead, 0.0);
  }
  int inside = 0;
  for (const Complex& root : companion_roots(monic)) {
    double r = std::abs(root);
    if (std::abs(r - 1.0) < tol.loop)
      throw NumericalError("polynomial root within 1e-8 of the unit circle (numerically gapless)");
    if (r < 1.0) ++inside;
  }
  return n_min + inside;
}

} // namespace

int kitaev_winding(const std::map<int, double>& coefficients,
                   const Tolerances& tol) {
  int by_sampling = kitaev_winding_by_sampling(coefficients, tol);
  int by_roots = kitaev_winding_by_roots(coefficients, tol);
  if (by_sampling != by_roots) {
    std::ostringstream os;
    os << "winding disagreement: sampling gives " << by_sampling
       << ", root counting gives " << by_roots;
    throw NumericalError(os.str());
  }
  return by_sampling;
}

int multichannel_winding(const HoppingModel& model, int grid_points,
                         const Tolerances& tol) {
  const int n = model.internal_dim();
  if (n % 2 != 0)
    throw ValidationError("multichannel winding needs even internal dimension");
  const int m = n / 2;

  for (int grid = grid_points; grid <= (1 << 17); grid *= 2) {
    std::vector<Complex> dets(grid + 1);
    std::vector<Matrix> polar(grid + 1);
    double min_abs = 1e300;
    for (int i = 0; i <= grid; ++i) {
      double k = two_pi * i / grid;
      Matrix a = fiber_hamiltonian(model, k).block(0, m, m, m);
      dets[i] = a.determinant();
      min_abs = std::min(min_abs, std::abs(dets[i]));
      polar[i] = polar_unitary(a);
    }
    if (min_abs <= tol.gap)
      throw GaplessError("det(A_k) vanishes on the circle (gapless multichannel model)");
    bool ok = true;
    for (int i = 0; i < grid; ++i) {
      if (std::abs(std::arg(dets[i + 1] / dets[i])) >= pi / 2.0) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    int by_det = winding_scalar(dets, tol);
    int by_polar = winding_unitary(polar, tol);
    if (by_det != by_polar) {
      std::ostringstream os;
      os << "multichannel winding disagreement: det loop gives " << by_det
         << ", polar loop gives " << by_polar;
      throw NumericalError(os.str());
    }
    return by_det;
  }
  throw NumericalError("det(A_k) loop cannot be sampled densely enough");
}

GaugeShiftReport gauge_shift_check(const TransportResult& tr,
                                   std::span<const Matrix> gauge,
                                   const SymmetrySet* set,
                                   const Tolerances& tol) {
  const int steps = tr.steps();
  if (static_cast<int>(gauge.size()) != steps + 1)
    throw ValidationError("gauge loop must provide one sample per transport grid point");

  const double block_tol = std::max(tol.intw, 10.0 * tr.intertwining_defect);
  for (int i = 0; i <= steps; ++i) {
    Matrix v = tr.bloch_basis(i);
    Matrix p = v.leftCols(tr.occupied_rank) * v.leftCols(tr.occupied_rank).adjoint();
    if ((gauge[i] * p - p * gauge[i]).norm() > block_tol)
      throw ValidationError("gauge is not block-diagonal with respect to the eigenprojections");
  }

  GaugeShiftReport report;
  report.gauge_winding = winding_unitary(gauge, tol);
  report.zak_before = wilson_zak(tr, tr.initial_basis.cols());

  double total = 0.0;
  Matrix prev = gauge[0] * tr.bloch_basis(0);
  for (int i = 1; i <= steps; ++i) {
    Matrix cur = gauge[i] * tr.bloch_basis(i);
    total += std::arg((prev.adjoint() * cur).determinant());
    prev = cur;
  }
  report.zak_after = total / two_pi;
  report.shift_residual = std::abs((report.zak_after - report.zak_before) -
                                   report.gauge_winding);
  if (report.shift_residual > tol.integer)
    throw NumericalError("Zak phase shift does not match the gauge winding number");

  if (set) {
    // A gauge compatible with an energy-sign -1 symmetry must carry even
    // winding. Compatibility: O B_k = B_{+-k} O on the sample grid.
    for (const SymmetryOperator& op : set->all_operators()) {
      if (op.energy_sign != -1) continue;
      report.checked_compatibility = true;
      double defect = 0.0;
      for (int i = 0; i <= steps; ++i) {
        Matrix lhs = op.antiunitary ? Matrix(op.matrix * gauge[i].conjugate())
                                    : Matrix(op.matrix * gauge[i]);
        const Matrix& partner = (op.momentum_sign == +1) ? gauge[i] : gauge[steps - i];
        defect = std::max(defect, (lhs - partner * op.matrix).norm());
      }
      if (defect < block_tol) {
        report.symmetry_compatible = true;
        if (report.gauge_winding % 2 != 0)
          throw NumericalError(
              "symmetry-compatible gauge with odd winding number; "
              "this contradicts the gauge-transformation law");
      }
    }
  }
  return report;
}

std::optional<std::map<int, double>> detect_kitaev_form(const HoppingModel& model,
                                                        double tol) {
  if (model.internal_dim() != 2) return std::nullopt;
  std::map<int, double> coeffs;
  for (const auto& [j, a] : model.hoppings()) {
    if (std::abs(a(0, 0)) > tol || std::abs(a(1, 1)) > tol) return std::nullopt;
    Complex c = a(0, 1);
    if (std::abs(c.imag()) > tol) return std::nullopt;
    if (std::abs(c.real()) > tol) coeffs[-j] = c.real();
  }
  if (coeffs.empty()) return std::nullopt;
  return coeffs;
}

bool detect_multichannel_form(const HoppingModel& model, double tol) {
  const int n = model.internal_dim();
  if (n % 2 != 0 || n < 2) return false;
  const int m = n / 2;
  bool any = false;
  for (const auto& [j, a] : model.hoppings()) {
    if (a.block(0, 0, m, m).norm() > tol) return false;
    if (a.block(m, m, m, m).norm() > tol) return false;
    const Matrix block = a.block(0, m, m, m);
    if (block.imag().norm() > tol) return false;
    if (block.norm() > tol) any = true;
  }
  return any;
}

InvariantReport compute_invariants(const HoppingModel& model,
                                   const SymmetrySet& set,
                                   const InvariantOptions& options,
                                   const Tolerances& tol) {
  InvariantReport report;
  report.transport_steps = options.transport_steps;
  report.gap_grid = options.gap_grid;

  report.gap = gap_at_zero(model, options.gap_grid, options.exec, tol);
  if (!report.gap.gapped) {
    std::ostringstream os;
    os << "spectral gap closes: min |E| = " << report.gap.min_abs_energy
       << " at k = " << report.gap.k_at_min;
    throw GaplessError(os.str());
  }

  for (const SymmetryOperator& op : set.declared()) {
    SymmetryVerification v =
        verify_symmetry(model, op, options.symmetry_grid, options.exec, tol);
    report.symmetry_checks.push_back(v);
    if (!v.passed) {
      std::ostringstream os;
      os << "declared symmetry " << to_string(op.label)
         << " fails verification (max deviation " << v.max_deviation << ")";
      throw SymmetryError(os.str());
    }
    report.projector_checks.push_back(verify_projector_relations(
        model, op, std::max(16, options.symmetry_grid / 2), options.exec, tol));
    if (!report.projector_checks.back().passed) {
      std::ostringstream os;
      os << "projector relation for " << to_string(op.label)
         << " fails verification";
      throw SymmetryError(os.str());
    }
  }

  report.azc_class = classify(set, nullptr, tol);
  report.quaternionic = detect_quaternionic(set, tol);

  TransportResult tr =
      parallel_transport(model, options.transport_steps, options.exec, tol);
  report.unitarity_defect = tr.unitarity_defect;
  report.intertwining_defect = tr.intertwining_defect;
  report.holonomy_reconstruction = tr.log.reconstruction;
  report.x_commutator = tr.x_commutator;

  report.zak = zak_phases(tr, tol);
  if (std::abs(report.zak.total_trace - report.zak.total_wilson) > tol.zak)
    throw NumericalError("total Zak phase: trace and Wilson evaluations disagree");
  report.z2 = z2_invariant(set, tr, tol);

  if (auto coeffs = detect_kitaev_form(model)) {
    report.oracle_winding = kitaev_winding(*coeffs, tol);
  } else if (detect_multichannel_form(model)) {
    report.oracle_winding = multichannel_winding(model, 4096, tol);
  }
  if (report.oracle_winding && report.z2 != Z2Value::NotApplicable) {
    int parity = ((*report.oracle_winding % 2) + 2) % 2;
    report.parity_consistent = (report.z2 == Z2Value::One) == (parity == 1);
  }
  return report;
}

} // namespace zakchain
