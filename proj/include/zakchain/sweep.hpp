#pragma once

#include "zakchain/invariants.hpp"

namespace zakchain {

/// Linear interpolation A_j(t) = (1-t) A_j(a) + t A_j(b); preserves the
/// relations of any fixed symmetry operator by linearity.
HoppingModel interpolate(const HoppingModel& a, const HoppingModel& b, double t,
                         const Tolerances& tol = {});

/// A straight path between two models sharing dimension and symmetry set.
struct ModelPath {
  HoppingModel start;
  HoppingModel stop;
  SymmetrySet symmetries;
  int samples = 101;
};

struct SweepSample {
  double t = 0.0;
  double gap_width = 0.0;
  bool gapped = false;
  bool resolved = true; // false: gapped but too close to a closing to certify z2
  Z2Value z2 = Z2Value::NotApplicable; // only meaningful when gapped && resolved
};

struct Transition {
  double t_lower = 0.0;
  double t_upper = 0.0;
  double location() const { return 0.5 * (t_lower + t_upper); }
};

struct SweepResult {
  std::vector<SweepSample> samples;
  std::vector<Transition> transitions;
  bool invariant_constant_per_segment = true;
};

struct SweepOptions {
  int transport_steps = 2048;
  int gap_grid = 1024;
  int symmetry_grid = 64;
  double bisection_width = 1e-3; // target width in t for transition brackets
  Exec exec = Exec::Parallel;
};

/// Evaluates gap and (where gapped and the class supports it) the Z2
/// invariant along the path; locates gap closings by bisection and checks
/// that the invariant is constant on each maximal gapped segment. Samples
/// are independent and evaluated in parallel. Throws SymmetryError naming t
/// if a declared symmetry fails at some sample.
SweepResult sweep(const ModelPath& path, const SweepOptions& options = {},
                  const Tolerances& tol = {});

} // namespace zakchain
