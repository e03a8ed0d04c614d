#include <doctest.h>

#include "test_helpers.hpp"
#include "zakchain/presets.hpp"
#include "zakchain/sweep.hpp"

using namespace zakchain;

namespace {

SweepOptions fast_options() {
  SweepOptions options;
  options.transport_steps = 512;
  options.gap_grid = 512;
  options.symmetry_grid = 32;
  return options;
}

} // namespace

TEST_SUITE("sweep") {

TEST_CASE("interpolation is linear and symmetry-preserving") {
  PresetModel a = kitaev_chain({{{0, 0.0}, {1, 1.0}}});
  PresetModel b = kitaev_chain({{{0, 2.0}, {1, 1.0}}});
  HoppingModel mid = interpolate(a.model, b.model, 0.5);
  CHECK((fiber_hamiltonian(mid, 0.7) -
         0.5 * (fiber_hamiltonian(a.model, 0.7) + fiber_hamiltonian(b.model, 0.7)))
            .norm() < 1e-14);
  for (const SymmetryOperator& op : a.symmetries.declared())
    CHECK(verify_symmetry(mid, op, 32).passed);

  PresetModel wide = multichannel_kitaev({2, {{0, RealMatrix::Identity(2, 2)}}});
  CHECK_THROWS_AS(interpolate(a.model, wide.model, 0.5), ValidationError);
}

TEST_CASE("kitaev mass sweep: one transition with invariant 1 -> 0") {
  PresetModel a = kitaev_chain({{{0, 0.0}, {1, 1.0}}});
  PresetModel b = kitaev_chain({{{0, 2.0}, {1, 1.0}}});
  ModelPath path{a.model, b.model, a.symmetries, 21};
  SweepResult result = sweep(path, fast_options());

  REQUIRE(result.transitions.size() == 1);
  CHECK(std::abs(result.transitions[0].location() - 0.5) < 5e-4);
  CHECK(result.invariant_constant_per_segment);

  bool saw_one = false, saw_zero = false;
  for (const SweepSample& s : result.samples) {
    if (!s.gapped) continue;
    if (s.t < 0.45) {
      CHECK(s.z2 == Z2Value::One);
      saw_one = true;
    }
    if (s.t > 0.55) {
      CHECK(s.z2 == Z2Value::Zero);
      saw_zero = true;
    }
  }
  CHECK(saw_one);
  CHECK(saw_zero);
}

TEST_CASE("constant path: single segment, no transitions") {
  PresetModel a = kitaev_chain({{{0, 0.5}, {1, 1.0}}});
  ModelPath path{a.model, a.model, a.symmetries, 11};
  SweepResult result = sweep(path, fast_options());
  CHECK(result.transitions.empty());
  CHECK(result.invariant_constant_per_segment);
  for (const SweepSample& s : result.samples) {
    CHECK(s.gapped);
    CHECK(s.z2 == Z2Value::One);
  }
}

TEST_CASE("gapped path keeps the invariant") {
  PresetModel a = kitaev_chain({{{0, 0.0}, {1, 1.0}}});
  PresetModel b = kitaev_chain({{{0, 0.5}, {1, 1.0}}});
  ModelPath path{a.model, b.model, a.symmetries, 11};
  SweepResult result = sweep(path, fast_options());
  CHECK(result.transitions.empty());
  for (const SweepSample& s : result.samples) {
    CHECK(s.gapped);
    CHECK(s.z2 == Z2Value::One);
  }
}

TEST_CASE("symmetry failure along the path names t") {
  // endpoint B breaks T = K (complex coefficient), declared set demands it
  PresetModel a = kitaev_chain({{{0, 0.5}, {1, 1.0}}});
  std::map<int, Matrix> hoppings;
  Matrix am1 = Matrix::Zero(2, 2);
  am1(0, 1) = Complex(0.0, 1.0);
  hoppings[-1] = am1;
  Matrix a0 = Matrix::Zero(2, 2);
  a0(0, 1) = a0(1, 0) = 0.5;
  hoppings[0] = a0;
  HoppingModel complex_chain(2, 1, std::move(hoppings));

  ModelPath path{a.model, complex_chain, a.symmetries, 5};
  try {
    sweep(path, fast_options());
    FAIL("expected SymmetryError");
  } catch (const SymmetryError& e) {
    CHECK(std::string(e.what()).find("t = ") != std::string::npos);
  }
}

TEST_CASE("serial and parallel sweep agree") {
  PresetModel a = kitaev_chain({{{0, 0.0}, {1, 1.0}}});
  PresetModel b = kitaev_chain({{{0, 0.4}, {1, 1.0}}});
  ModelPath path{a.model, b.model, a.symmetries, 7};
  SweepOptions options = fast_options();
  options.exec = Exec::Serial;
  SweepResult s = sweep(path, options);
  options.exec = Exec::Parallel;
  SweepResult p = sweep(path, options);
  REQUIRE(s.samples.size() == p.samples.size());
  for (std::size_t i = 0; i < s.samples.size(); ++i) {
    CHECK(s.samples[i].gap_width == p.samples[i].gap_width);
    CHECK(s.samples[i].z2 == p.samples[i].z2);
  }
}

} // TEST_SUITE
