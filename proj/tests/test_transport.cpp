#include <doctest.h>

#include "test_helpers.hpp"
#include "zakchain/presets.hpp"
#include "zakchain/transport.hpp"

using namespace zakchain;
using zakchain::testing::random_gapped_model;
using zakchain::testing::random_unitary;

namespace {

HoppingModel constant_model() {
  Matrix a0 = Matrix::Zero(2, 2);
  a0(0, 0) = 1.0;
  a0(1, 1) = -1.0;
  return HoppingModel(2, 0, {{0, a0}});
}

HoppingModel direct_sum(const HoppingModel& a, const HoppingModel& b) {
  const int na = a.internal_dim(), nb = b.internal_dim();
  std::map<int, Matrix> hoppings;
  const int range = std::max(a.range(), b.range());
  for (int j = -range; j <= range; ++j) {
    Matrix block = Matrix::Zero(na + nb, na + nb);
    block.topLeftCorner(na, na) = a.hopping(j);
    block.bottomRightCorner(nb, nb) = b.hopping(j);
    if (block.norm() > 0.0) hoppings[j] = block;
  }
  return HoppingModel(na + nb, range, std::move(hoppings));
}

} // namespace

TEST_SUITE("transport") {

TEST_CASE("holonomy logarithm branch and round trip") {
  // identity: all phases zero
  HolonomyLog id = holonomy_log(Matrix::Identity(3, 3));
  CHECK(id.x.norm() < 1e-12);

  // branch maps -pi/2 to 3pi/2
  Matrix u = Matrix::Zero(2, 2);
  u(0, 0) = std::exp(Complex(0.0, pi / 2.0));
  u(1, 1) = std::exp(Complex(0.0, -pi / 2.0));
  HolonomyLog log = holonomy_log(u);
  RealVector sorted = log.phases;
  std::sort(sorted.data(), sorted.data() + sorted.size());
  CHECK(sorted(0) == doctest::Approx(pi / 2.0));
  CHECK(sorted(1) == doctest::Approx(3.0 * pi / 2.0));
  CHECK(log.phases.sum() == doctest::Approx(two_pi));
  CHECK((log.x - log.x.adjoint()).norm() < 1e-12);

  // round trip on random unitaries
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    int n = 2 + static_cast<int>(rng() % 5);
    Matrix v = random_unitary(rng, n);
    HolonomyLog l = holonomy_log(v);
    CHECK(l.reconstruction < 1e-8);
    CHECK(l.phases.minCoeff() >= 0.0);
    CHECK(l.phases.maxCoeff() < two_pi);
  }

  // non-unitary input refused
  CHECK_THROWS_AS(holonomy_log(2.0 * Matrix::Identity(2, 2)), ValidationError);
}

TEST_CASE("holonomy logarithm collapses phases straddling the branch point") {
  // eigenphases epsilon and 2pi - epsilon describe one degenerate eigenvalue
  std::mt19937_64 rng(6);
  Matrix v = random_unitary(rng, 2);
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = std::exp(Complex(0.0, 1e-10));
  d(1, 1) = std::exp(Complex(0.0, -1e-10));
  HolonomyLog log = holonomy_log(v * d * v.adjoint());
  CHECK(log.phases(0) == log.phases(1));
  CHECK(log.reconstruction < 1e-8);
}

TEST_CASE("constant projector transports trivially") {
  TransportResult tr = parallel_transport(constant_model(), 64);
  for (const Matrix& t : tr.transport)
    CHECK((t - Matrix::Identity(2, 2)).norm() < 1e-13);
  CHECK((tr.holonomy - Matrix::Identity(2, 2)).norm() < 1e-13);
  CHECK(tr.log.x.norm() < 1e-10);

  TransportReport report = verify_transport(tr, constant_model());
  CHECK(report.unitarity_defect < 1e-12);
  CHECK(report.intertwining_defect < 1e-12);
  CHECK(report.telescopic_defect < 1e-12);
}

TEST_CASE("block-diagonal models transport blockwise") {
  PresetModel chain_a = kitaev_chain({{{0, 0.5}, {1, 1.0}}});
  PresetModel chain_b = kitaev_chain({{{1, 1.0}}});
  HoppingModel combined = direct_sum(chain_a.model, chain_b.model);

  const int steps = 256;
  TransportResult ta = parallel_transport(chain_a.model, steps);
  TransportResult tb = parallel_transport(chain_b.model, steps);
  TransportResult tc = parallel_transport(combined, steps);

  for (int i = 0; i <= steps; i += 16) {
    Matrix expected = Matrix::Zero(4, 4);
    expected.topLeftCorner(2, 2) = ta.transport[i];
    expected.bottomRightCorner(2, 2) = tb.transport[i];
    CHECK((tc.transport[i] - expected).norm() < 1e-10);
  }
}

TEST_CASE("transport contract on random gapped models") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 6; ++trial) {
    int n = 2 + static_cast<int>(rng() % 7); // up to 8
    HoppingModel model = random_gapped_model(rng, n, 1 + static_cast<int>(rng() % 4));
    TransportResult tr = parallel_transport(model, 2048);
    CHECK(tr.unitarity_defect < 1e-6);
    CHECK(tr.intertwining_defect < 1e-6);
    CHECK(tr.x_commutator < 1e-6);
    CHECK((tr.transport.front() - Matrix::Identity(n, n)).norm() == 0.0);

    TransportReport report = verify_transport(tr, model);
    CHECK(report.telescopic_defect < 1e-6);
  }
}

TEST_CASE("gapless model refuses to transport") {
  PresetModel closed = kitaev_chain({{{0, 1.0}, {1, 1.0}}});
  CHECK_THROWS_AS(parallel_transport(closed.model, 128), GaplessError);
  CHECK_THROWS_AS(parallel_transport(constant_model(), 32), ValidationError); // M < 64
}

TEST_CASE("transports of P and 1 - P coincide") {
  std::mt19937_64 rng(43);
  HoppingModel model = random_gapped_model(rng, 4, 2);
  const int n = model.internal_dim();

  ProjectorFamily occupied = [&](double k) {
    return projector_with_derivative(model, k);
  };
  ProjectorFamily complement = [&](double k) {
    auto [p, dp] = projector_with_derivative(model, k);
    return std::pair<Matrix, Matrix>(Matrix::Identity(n, n) - p, Matrix(-dp));
  };
  std::vector<Matrix> a = integrate_transport(occupied, n, 256);
  std::vector<Matrix> b = integrate_transport(complement, n, 256);
  double diff = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    diff = std::max(diff, (a[i] - b[i]).norm());
  CHECK(diff < 1e-12);
}

TEST_CASE("fourth-order convergence of the intertwining defect") {
  std::mt19937_64 rng(47);
  HoppingModel model = random_gapped_model(rng, 4, 3, 0.3);
  double coarse = parallel_transport(model, 128).intertwining_defect;
  double fine = parallel_transport(model, 256).intertwining_defect;
  REQUIRE(coarse > 1e-12); // above the floating-point floor
  CHECK(coarse / fine >= 8.0);
}

TEST_CASE("serial and parallel transport agree bitwise") {
  std::mt19937_64 rng(53);
  HoppingModel model = random_gapped_model(rng, 4, 2);
  TransportResult s = parallel_transport(model, 128, Exec::Serial);
  TransportResult p = parallel_transport(model, 128, Exec::Parallel);
  CHECK((s.holonomy - p.holonomy).norm() == 0.0);
  CHECK(s.intertwining_defect == p.intertwining_defect);
}

TEST_CASE("initial basis ordering") {
  Matrix basis = initial_basis(constant_model());
  Vector e0(2), e1(2);
  e0 << 0.0, 1.0;
  e1 << 1.0, 0.0;
  CHECK((basis.col(0) - e0).norm() < 1e-14); // energy -1 first
  CHECK((basis.col(1) - e1).norm() < 1e-14);

  PresetModel flat = kitaev_chain({{{1, 1.0}}});
  Matrix fb = initial_basis(flat.model);
  Vector occupied(2);
  occupied << 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0);
  CHECK((fb.col(0) - occupied).norm() < 1e-12);

  // z(0) = c_0 + c_1 = 0: gapless exactly at the origin
  CHECK_THROWS_AS(initial_basis(kitaev_chain({{{0, -1.0}, {1, 1.0}}}).model),
                  GaplessError);
}

TEST_CASE("bloch basis: k = 0 identity, periodicity, spanning") {
  PresetModel half = kitaev_chain({{{0, 0.5}, {1, 1.0}}});
  TransportResult tr = parallel_transport(half.model, 1024);

  CHECK((tr.bloch_basis(0) - tr.initial_basis).norm() < 1e-13);
  // telescopic + e^{-iX} cancellation makes the basis periodic
  CHECK((tr.bloch_basis(tr.steps()) - tr.bloch_basis(0)).norm() < 1e-8);

  for (int i = 0; i <= tr.steps(); i += 128) {
    Matrix v = tr.bloch_basis(i);
    CHECK((v.adjoint() * v - Matrix::Identity(2, 2)).norm() < 1e-10);
    Matrix p = occupied_projector(half.model, tr.grid[i]);
    CHECK((p * v.col(0) - v.col(0)).norm() < 1e-8); // occupied column spans Range P
  }

  // constant model: X = 0, basis equals the initial one at every k
  TransportResult flat = parallel_transport(constant_model(), 64);
  for (int i = 0; i <= flat.steps(); i += 8)
    CHECK((flat.bloch_basis(i) - flat.initial_basis).norm() < 1e-10);

  // momentum lookup snaps to the nearest grid sample and wraps
  CHECK((tr.bloch_basis_at(tr.grid[37]) - tr.bloch_basis(37)).norm() == 0.0);
  CHECK((tr.bloch_basis_at(0.0) - tr.bloch_basis(0)).norm() == 0.0);
  CHECK((tr.bloch_basis_at(two_pi) - tr.bloch_basis(tr.steps())).norm() == 0.0);
  CHECK((tr.bloch_basis_at(-tr.grid[37]) - tr.bloch_basis(tr.steps() - 37)).norm() ==
        0.0);
}

TEST_CASE("symmetric basis checks on the Kitaev chain") {
  PresetModel preset = kitaev_chain({{{0, 0.5}, {1, 1.0}}});
  TransportResult tr = parallel_transport(preset.model, 1024);
  SymmetricBasisReport report = verify_symmetric_basis(tr, preset.symmetries, 64);
  CHECK(report.all_passed);
  REQUIRE(report.checks.size() == 6); // T, C, S + TC, TS, CS
  for (const SymmetricBasisCheck& check : report.checks) {
    CHECK(check.transport_defect < 1e-6);
    CHECK(check.subspace_defect < 1e-6);
    CHECK_FALSE(check.quaternionic_case);
    CHECK(check.vector_defect < 1e-6);
  }
}

TEST_CASE("quaternionic double: subspace check passes, vector check fails") {
  PresetModel base = kitaev_chain({{{0, 0.5}, {1, 1.0}}});
  PresetModel doubled = quaternionic_double(base.model, base.symmetries);
  TransportResult tr = parallel_transport(doubled.model, 1024);

  // Kramers: O v(0) is orthogonal to v(0) for the square -1 operator
  const SymmetryOperator& t = *doubled.symmetries.time_reversal;
  Vector v0 = tr.initial_basis.col(0);
  CHECK(std::abs(v0.dot(t.apply(v0))) < 1e-10);

  SymmetricBasisReport report = verify_symmetric_basis(tr, doubled.symmetries, 32);
  CHECK(report.all_passed);
  bool saw_quaternionic = false;
  for (const SymmetricBasisCheck& check : report.checks) {
    if (check.label == SymLabel::T) {
      saw_quaternionic = true;
      CHECK(check.quaternionic_case);
      CHECK(check.subspace_defect < 1e-6);
      CHECK(check.vector_defect > 0.9); // orthogonality forces failure
    }
  }
  CHECK(saw_quaternionic);
}

TEST_CASE("trivial symmetric basis on a constant chiral model") {
  Matrix a0 = Matrix::Zero(2, 2);
  a0(0, 0) = 1.0;
  a0(1, 1) = -1.0;
  HoppingModel model(2, 0, {{0, a0}});
  Matrix sigma1(2, 2);
  sigma1 << 0.0, 1.0, 1.0, 0.0;
  SymmetrySet set;
  set.chiral = SymmetryOperator::chiral(sigma1);
  REQUIRE(verify_symmetry(model, *set.chiral, 16).passed);

  TransportResult tr = parallel_transport(model, 64);
  SymmetricBasisReport report = verify_symmetric_basis(tr, set, 16);
  CHECK(report.all_passed);
}

} // TEST_SUITE
