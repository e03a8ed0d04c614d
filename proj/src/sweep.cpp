#include "zakchain/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "zakchain/parallel.hpp"

namespace zakchain {

HoppingModel interpolate(const HoppingModel& a, const HoppingModel& b, double t,
                         const Tolerances& tol) {
  if (a.internal_dim() != b.internal_dim())
    throw ValidationError("cannot interpolate models of different internal dimension");
  std::map<int, Matrix> hoppings;
  const int n = a.internal_dim();
  const int range = std::max(a.range(), b.range());
  for (int j = -range; j <= range; ++j) {
    Matrix mix = (1.0 - t) * a.hopping(j) + t * b.hopping(j);
    if (mix.norm() > 0.0) hoppings[j] = std::move(mix);
  }
  if (hoppings.empty()) hoppings[0] = Matrix::Zero(n, n);
  return HoppingModel(n, range, std::move(hoppings), tol);
}

namespace {

struct PointEval {
  double gap_width = 0.0;
  double min_abs = 0.0;
  bool gapped = false;
  bool resolved = true;
  Z2Value z2 = Z2Value::NotApplicable;

  bool good() const { return gapped && resolved; }
};

PointEval eval_point(const ModelPath& path, double t, bool want_z2,
                     const SweepOptions& options, Exec inner,
                     const Tolerances& tol) {
  HoppingModel model = interpolate(path.start, path.stop, t, tol);
  for (const SymmetryOperator& op : path.symmetries.declared()) {
    SymmetryVerification v =
        verify_symmetry(model, op, options.symmetry_grid, inner, tol);
    if (!v.passed) {
      std::ostringstream os;
      os << "declared symmetry " << to_string(op.label)
         << " fails at t = " << t;
      throw SymmetryError(os.str());
    }
  }
  PointEval out;
  GapReport gap = gap_at_zero(model, options.gap_grid, inner, tol);
  out.gap_width = gap.gap_width;
  out.min_abs = gap.min_abs_energy;
  out.gapped = gap.gapped;
  if (gap.gapped && want_z2) {
    // So close to a closing that the transport cannot certify the invariant
    // at any affordable step count: flag instead of failing the whole sweep.
    try {
      TransportResult tr = parallel_transport(
          model,
          adaptive_transport_steps(options.transport_steps, gap.min_abs_energy),
          inner, tol);
      out.z2 = z2_invariant(path.symmetries, tr, tol);
    } catch (const NumericalError&) {
      out.resolved = false;
    } catch (const GaplessError&) {
      out.resolved = false;
    }
  }
  return out;
}

} // namespace

SweepResult sweep(const ModelPath& path, const SweepOptions& options,
                  const Tolerances& tol) {
  if (path.samples < 2) throw ValidationError("sweep needs at least 2 samples");
  if (path.start.internal_dim() != path.stop.internal_dim())
    throw ValidationError("sweep endpoints differ in internal dimension");

  AZCClass cls = classify(path.symmetries, nullptr, tol);
  const bool applicable = cls.label != AZCLabel::A && cls.label != AZCLabel::AI &&
                          cls.label != AZCLabel::AII;

  const int n_samples = path.samples;
  std::vector<PointEval> evals(n_samples);
  std::vector<double> ts(n_samples);
  for (int i = 0; i < n_samples; ++i)
    ts[i] = static_cast<double>(i) / (n_samples - 1);

  // Samples are independent; inner kernels run serial to avoid nesting.
  for_each_index(n_samples, options.exec, [&](int i) {
    evals[i] = eval_point(path, ts[i], applicable, options, Exec::Serial, tol);
  });

  SweepResult result;
  result.samples.resize(n_samples);
  for (int i = 0; i < n_samples; ++i)
    result.samples[i] = {ts[i], evals[i].gap_width, evals[i].gapped,
                         evals[i].resolved, evals[i].z2};

  // Transitions sit inside "break" runs (gapless or unresolved samples) or
  // between adjacent good samples whose invariant jumps (a closing the
  // sampling stepped over). Edges of gapless runs are refined by bisection.
  const double side_width = options.bisection_width / 4.0;
  auto gapped_at = [&](double t) {
    return eval_point(path, t, false, options, options.exec, tol).gapped;
  };
  auto refine_edge = [&](double t_gapped, double t_ungapped) {
    double g = t_gapped, u = t_ungapped;
    while (std::abs(u - g) > side_width) {
      double mid = 0.5 * (g + u);
      if (gapped_at(mid))
        g = mid;
      else
        u = mid;
    }
    return 0.5 * (g + u);
  };

  int i = 0;
  while (i < n_samples) {
    if (!evals[i].good()) {
      int run_end = i;
      bool any_gapless = !evals[i].gapped;
      while (run_end + 1 < n_samples && !evals[run_end + 1].good()) {
        ++run_end;
        any_gapless = any_gapless || !evals[run_end].gapped;
      }
      Transition tr;
      if (any_gapless) {
        tr.t_lower = (i > 0) ? refine_edge(ts[i - 1], ts[i]) : ts[i];
        tr.t_upper = (run_end + 1 < n_samples)
                         ? refine_edge(ts[run_end + 1], ts[run_end])
                         : ts[run_end];
      } else {
        // unresolved-only run: report the sample bracket as is
        tr.t_lower = (i > 0) ? ts[i - 1] : ts[i];
        tr.t_upper = (run_end + 1 < n_samples) ? ts[run_end + 1] : ts[run_end];
      }
      result.transitions.push_back(tr);
      i = run_end + 1;
      continue;
    }
    if (i + 1 < n_samples && evals[i + 1].good() && applicable &&
        evals[i].z2 != evals[i + 1].z2) {
      Z2Value left = evals[i].z2;
      auto same_phase = [&](double t) {
        PointEval e = eval_point(path, t, true, options, options.exec, tol);
        return e.good() && e.z2 == left;
      };
      double lo = ts[i], hi = ts[i + 1];
      while (hi - lo > side_width) {
        double mid = 0.5 * (lo + hi);
        if (same_phase(mid))
          lo = mid;
        else
          hi = mid;
      }
      // A jump is a transition only if the gap actually dips at the change
      // point; a jump over an open gap contradicts topological invariance.
      PointEval at_change =
          eval_point(path, 0.5 * (lo + hi), false, options, options.exec, tol);
      double flank = std::min(evals[i].min_abs, evals[i + 1].min_abs);
      if (!at_change.gapped || at_change.min_abs < 0.5 * flank)
        result.transitions.push_back({lo, hi});
      else
        result.invariant_constant_per_segment = false;
    }
    ++i;
  }

  // Constancy of the invariant on each maximal run of good samples; runs are
  // split at breaks and at detected transitions.
  if (applicable) {
    std::size_t next_transition = 0;
    std::sort(result.transitions.begin(), result.transitions.end(),
              [](const Transition& a, const Transition& b) {
                return a.t_lower < b.t_lower;
              });
    Z2Value segment_value = Z2Value::NotApplicable;
    bool have_value = false;
    for (int s = 0; s < n_samples; ++s) {
      while (next_transition < result.transitions.size() &&
             result.transitions[next_transition].t_upper < ts[s]) {
        ++next_transition;
        have_value = false;
      }
      if (!evals[s].good()) {
        have_value = false;
        continue;
      }
      if (!have_value) {
        segment_value = evals[s].z2;
        have_value = true;
      } else if (evals[s].z2 != segment_value) {
        result.invariant_constant_per_segment = false;
      }
    }
  }
  return result;
}

} // namespace zakchain
