#include "zakchain/symmetry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "zakchain/linalg.hpp"
#include "zakchain/parallel.hpp"

namespace zakchain {

std::string to_string(SymLabel label) {
  switch (label) {
    case SymLabel::T: return "T";
    case SymLabel::C: return "C";
    case SymLabel::S: return "S";
    case SymLabel::TC: return "TC";
    case SymLabel::TS: return "TS";
    case SymLabel::CS: return "CS";
    case SymLabel::TCS: return "TCS";
    case SymLabel::Custom: return "custom";
  }
  return "?";
}

std::string to_string(AZCLabel label) {
  switch (label) {
    case AZCLabel::A: return "A";
    case AZCLabel::AIII: return "AIII";
    case AZCLabel::AI: return "AI";
    case AZCLabel::BDI: return "BDI";
    case AZCLabel::D: return "D";
    case AZCLabel::DIII: return "DIII";
    case AZCLabel::AII: return "AII";
    case AZCLabel::CII: return "CII";
    case AZCLabel::C: return "C";
    case AZCLabel::CI: return "CI";
  }
  return "?";
}

std::string to_string(KTheory1D k) {
  switch (k) {
    case KTheory1D::Zero: return "0";
    case KTheory1D::Z: return "Z";
    case KTheory1D::Z2: return "Z2";
  }
  return "?";
}

std::string to_string(InvariantSupport s) {
  switch (s) {
    case InvariantSupport::Zero: return "0";
    case InvariantSupport::Z2: return "Z2";
  }
  return "?";
}

SymmetryOperator SymmetryOperator::time_reversal(Matrix u) {
  return {SymLabel::T, std::move(u), true, +1, -1};
}

SymmetryOperator SymmetryOperator::particle_hole(Matrix u) {
  return {SymLabel::C, std::move(u), true, -1, -1};
}

SymmetryOperator SymmetryOperator::chiral(Matrix u) {
  return {SymLabel::S, std::move(u), false, -1, +1};
}

Vector SymmetryOperator::apply(const Vector& v) const {
  return antiunitary ? Vector(matrix * v.conjugate()) : Vector(matrix * v);
}

Matrix SymmetryOperator::conjugate_matrix(const Matrix& a) const {
  if (antiunitary) return matrix * a.conjugate() * matrix.adjoint();
  return matrix * a * matrix.adjoint();
}

void SymmetryOperator::validate(const Tolerances& tol) const {
  if (matrix.rows() != matrix.cols())
    throw ValidationError("symmetry operator matrix is not square");
  if (unitarity_defect(matrix) > tol.proj)
    throw ValidationError("symmetry operator matrix is not unitary");
  if ((momentum_sign == -1) != antiunitary)
    throw ValidationError("momentum sign must be -1 exactly for antiunitary operators");
  if (energy_sign != 1 && energy_sign != -1)
    throw ValidationError("energy sign must be +-1");
}

int square_sign(const SymmetryOperator& op, const Tolerances& tol) {
  Matrix sq = op.antiunitary ? Matrix(op.matrix * op.matrix.conjugate())
                             : Matrix(op.matrix * op.matrix);
  const int n = sq.rows();
  Matrix id = Matrix::Identity(n, n);
  double plus = (sq - id).norm();
  double minus = (sq + id).norm();
  double scale = tol.proj * std::max(1.0, sq.norm());
  if (plus <= scale) return +1;
  if (minus <= scale) return -1;
  throw NumericalError("operator square is not proportional to +-Identity (not an involution)");
}

SymmetryOperator compose(const SymmetryOperator& a, const SymmetryOperator& b,
                         SymLabel label) {
  if (a.matrix.rows() != b.matrix.rows())
    throw ValidationError("cannot compose symmetry operators of different dimension");
  SymmetryOperator out;
  out.label = label;
  out.matrix = a.antiunitary ? Matrix(a.matrix * b.matrix.conjugate())
                             : Matrix(a.matrix * b.matrix);
  out.antiunitary = a.antiunitary != b.antiunitary;
  out.energy_sign = a.energy_sign * b.energy_sign;
  out.momentum_sign = a.momentum_sign * b.momentum_sign;
  return out;
}

SymmetryVerification verify_symmetry(const HoppingModel& model,
                                     const SymmetryOperator& op,
                                     int grid_points, Exec exec,
                                     const Tolerances& tol) {
  op.validate(tol);
  if (op.matrix.rows() != model.internal_dim())
    throw ValidationError("symmetry operator dimension does not match the model");
  const double h = two_pi / grid_points;
  std::vector<double> dev(grid_points);
  for_each_index(grid_points, exec, [&](int i) {
    double k = i * h;
    Matrix lhs = op.conjugate_matrix(fiber_hamiltonian(model, k));
    Matrix rhs = static_cast<double>(op.energy_sign) *
                 fiber_hamiltonian(model, op.momentum_sign * k);
    dev[i] = (lhs - rhs).norm();
  });
  SymmetryVerification v;
  v.label = op.label;
  v.max_deviation = *std::max_element(dev.begin(), dev.end());
  v.tolerance = tol.sym(model.norm_scale());
  v.passed = v.max_deviation < v.tolerance;
  return v;
}

SymmetryVerification verify_projector_relations(const HoppingModel& model,
                                                const SymmetryOperator& op,
                                                int grid_points, Exec exec,
                                                const Tolerances& tol) {
  op.validate(tol);
  const double h = two_pi / grid_points;
  const int n = model.internal_dim();
  std::vector<double> dev(grid_points);
  for_each_index(grid_points, exec, [&](int i) {
    double k = i * h;
    Matrix p = occupied_projector(model, k, tol);
    Matrix target = occupied_projector(model, wrap_to_period(op.momentum_sign * k), tol);
    if (op.energy_sign == -1) target = Matrix::Identity(n, n) - target;
    dev[i] = (op.conjugate_matrix(p) - target).norm();
  });
  SymmetryVerification v;
  v.label = op.label;
  v.max_deviation = *std::max_element(dev.begin(), dev.end());
  v.tolerance = tol.sym(model.norm_scale());
  v.passed = v.max_deviation < v.tolerance;
  return v;
}

std::optional<SymmetryOperator> SymmetrySet::composite(SymLabel label) const {
  switch (label) {
    case SymLabel::TC:
      if (time_reversal && particle_hole)
        return compose(*time_reversal, *particle_hole, SymLabel::TC);
      return std::nullopt;
    case SymLabel::TS:
      if (time_reversal && chiral)
        return compose(*time_reversal, *chiral, SymLabel::TS);
      return std::nullopt;
    case SymLabel::CS:
      if (particle_hole && chiral)
        return compose(*particle_hole, *chiral, SymLabel::CS);
      return std::nullopt;
    case SymLabel::TCS:
      if (time_reversal && particle_hole && chiral)
        return compose(compose(*time_reversal, *particle_hole), *chiral, SymLabel::TCS);
      return std::nullopt;
    default:
      return std::nullopt;
  }
}

std::vector<SymmetryOperator> SymmetrySet::declared() const {
  std::vector<SymmetryOperator> ops;
  if (time_reversal) ops.push_back(*time_reversal);
  if (particle_hole) ops.push_back(*particle_hole);
  if (chiral) ops.push_back(*chiral);
  return ops;
}

std::vector<SymmetryOperator> SymmetrySet::all_operators() const {
  std::vector<SymmetryOperator> ops = declared();
  for (SymLabel l : {SymLabel::TC, SymLabel::TS, SymLabel::CS})
    if (auto c = composite(l)) ops.push_back(*c);
  return ops;
}

namespace {

struct ClassRow {
  int t_sq;  // 0 absent, else square sign
  int c_sq;
  int s_present;
  AZCLabel label;
  KTheory1D ktheory;
  InvariantSupport support;
};

// Tenfold-way table, d = 1 column, plus the support of the Zak-phase
// invariant per class.
constexpr std::array<ClassRow, 10> class_table{{
    {0, 0, 0, AZCLabel::A, KTheory1D::Zero, InvariantSupport::Zero},
    {0, 0, 1, AZCLabel::AIII, KTheory1D::Z, InvariantSupport::Z2},
    {+1, 0, 0, AZCLabel::AI, KTheory1D::Zero, InvariantSupport::Zero},
    {+1, +1, 1, AZCLabel::BDI, KTheory1D::Z, InvariantSupport::Z2},
    {0, +1, 0, AZCLabel::D, KTheory1D::Z2, InvariantSupport::Z2},
    {-1, +1, 1, AZCLabel::DIII, KTheory1D::Z2, InvariantSupport::Zero},
    {-1, 0, 0, AZCLabel::AII, KTheory1D::Zero, InvariantSupport::Zero},
    {-1, -1, 1, AZCLabel::CII, KTheory1D::Z, InvariantSupport::Zero},
    {0, -1, 0, AZCLabel::C, KTheory1D::Zero, InvariantSupport::Zero},
    {+1, -1, 1, AZCLabel::CI, KTheory1D::Zero, InvariantSupport::Zero},
}};

} // namespace

AZCClass classify(const SymmetrySet& set, Complex* consistency_phase,
                  const Tolerances& tol) {
  std::optional<SymmetryOperator> t = set.time_reversal;
  std::optional<SymmetryOperator> c = set.particle_hole;
  bool s_present = set.chiral.has_value();

  // The third symmetry is determined by the product of the other two.
  if (t && c && set.chiral) {
    SymmetryOperator tc = compose(*t, *c, SymLabel::TC);
    const Matrix& us = set.chiral->matrix;
    Complex accepted(0.0, 0.0);
    for (Complex eta : {Complex(1, 0), Complex(-1, 0), Complex(0, 1), Complex(0, -1)}) {
      if ((us - eta * tc.matrix).norm() <= tol.proj * std::max(1.0, us.norm())) {
        accepted = eta;
        break;
      }
    }
    if (accepted == Complex(0.0, 0.0))
      throw SymmetryError("declared S is not proportional to T*C by a phase in {+-1, +-i}");
    if (consistency_phase) *consistency_phase = accepted;
  } else if (t && c) {
    s_present = true; // S := TC exists as a composite
  } else if (t && set.chiral) {
    c = compose(*t, *set.chiral, SymLabel::TS);
    c->label = SymLabel::C;
  } else if (c && set.chiral) {
    t = compose(*c, *set.chiral, SymLabel::CS);
    t->label = SymLabel::T;
  }

  int t_sq = t ? square_sign(*t, tol) : 0;
  int c_sq = c ? square_sign(*c, tol) : 0;
  int s = s_present ? 1 : 0;
  for (const ClassRow& row : class_table) {
    if (row.t_sq == t_sq && row.c_sq == c_sq && row.s_present == s)
      return {row.label, row.ktheory, row.support};
  }
  std::ostringstream os;
  os << "symmetry content (T^2 = " << t_sq << ", C^2 = " << c_sq
     << ", S = " << s << ") matches no tenfold-way row";
  throw SymmetryError(os.str());
}

QuaternionicWitness detect_quaternionic(const SymmetrySet& set,
                                        const Tolerances& tol) {
  std::vector<SymmetryOperator> candidates;
  if (set.time_reversal) candidates.push_back(*set.time_reversal);
  if (set.particle_hole) candidates.push_back(*set.particle_hole);
  for (SymLabel l : {SymLabel::TS, SymLabel::CS})
    if (auto comp = set.composite(l)) candidates.push_back(*comp);
  for (const SymmetryOperator& op : candidates) {
    if (op.antiunitary && square_sign(op, tol) == -1) return {true, op.label};
  }
  return {false, SymLabel::Custom};
}

QuaternionicDetReport quaternionic_det_check(const Matrix& u,
                                             const SymmetryOperator& o,
                                             const Tolerances& tol) {
  if (!o.antiunitary || square_sign(o, tol) != -1)
    throw ValidationError("quaternionic check needs an antiunitary operator with square -1");
  QuaternionicDetReport report;
  report.commutation_defect = (o.conjugate_matrix(u) - u).norm();
  if (report.commutation_defect > tol.sym(u.norm()))
    throw ValidationError("unitary does not commute with the quaternionic structure");

  report.det_deviation = std::abs(u.determinant() - Complex(1.0, 0.0));
  if (report.det_deviation > tol.integer)
    throw NumericalError("determinant deviates from 1 under a quaternionic structure");

  // Pair eigenvalues with their complex conjugates (greedy matching).
  Eigen::ComplexEigenSolver<Matrix> solver(u, false);
  std::vector<Complex> evs(solver.eigenvalues().data(),
                           solver.eigenvalues().data() + solver.eigenvalues().size());
  std::vector<bool> used(evs.size(), false);
  report.spectrum_paired = true;
  for (std::size_t i = 0; i < evs.size(); ++i) {
    if (used[i]) continue;
    used[i] = true;
    double best = 1e300;
    std::size_t match = evs.size();
    for (std::size_t j = 0; j < evs.size(); ++j) {
      if (used[j] && j != i) continue;
      if (j == i && std::abs(evs[i].imag()) > tol.intw) continue;
      double d = std::abs(evs[j] - std::conj(evs[i]));
      if (d < best) {
        best = d;
        match = j;
      }
    }
    if (match == evs.size() || best > 1e-6) {
      report.spectrum_paired = false;
      break;
    }
    used[match] = true;
  }
  return report;
}

} // namespace zakchain
