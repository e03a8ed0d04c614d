// Timing comparison of the serial reference kernels against their OpenMP
// counterparts, on a 12-band multichannel chain. Also reports the maximum
// discrepancy between the two paths (expected to be exactly zero: both run
// the same per-point evaluations).

#include <omp.h>

#include <cstdio>
#include <random>

#include "zakchain/invariants.hpp"
#include "zakchain/presets.hpp"
#include "zakchain/sweep.hpp"

using namespace zakchain;

namespace {

PresetModel make_bench_model(int channels, int range, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-0.25, 0.25);
  MultichannelSpec spec;
  spec.channels = channels;
  RealMatrix a0 = RealMatrix::Identity(channels, channels);
  for (int r = 0; r < channels; ++r)
    for (int c = 0; c < channels; ++c) a0(r, c) += 0.3 * dist(rng);
  spec.coefficients[0] = a0;
  for (int n = 1; n <= range; ++n) {
    RealMatrix a(channels, channels);
    for (int r = 0; r < channels; ++r)
      for (int c = 0; c < channels; ++c) a(r, c) = dist(rng) / n;
    spec.coefficients[n] = a;
  }
  return multichannel_kitaev(spec);
}

template <class F>
double timed(F&& fn) {
  double t0 = omp_get_wtime();
  fn();
  return omp_get_wtime() - t0;
}

void report(const char* name, double serial, double parallel, double diff) {
  std::printf("%-24s %10.3fs %10.3fs %8.2fx   max diff %.3g\n", name, serial,
              parallel, serial / parallel, diff);
}

} // namespace

int main() {
  const int grid = 8192;
  PresetModel preset = make_bench_model(6, 6, 12345);
  const HoppingModel& model = preset.model;

  std::printf("threads: %d\n", omp_get_max_threads());
  std::printf("model: N = %d, R = %d, k-grid = %d\n\n", model.internal_dim(),
              model.range(), grid);
  std::printf("%-24s %11s %11s %9s\n", "kernel", "serial", "parallel", "speedup");

  {
    GapReport gs, gp;
    double ts = timed([&] { gs = gap_at_zero(model, grid, Exec::Serial); });
    double tp = timed([&] { gp = gap_at_zero(model, grid, Exec::Parallel); });
    report("gap scan", ts, tp, std::abs(gs.min_abs_energy - gp.min_abs_energy));
  }
  {
    SymmetryVerification vs, vp;
    const SymmetryOperator& op = *preset.symmetries.chiral;
    double ts = timed([&] { vs = verify_symmetry(model, op, grid, Exec::Serial); });
    double tp = timed([&] { vp = verify_symmetry(model, op, grid, Exec::Parallel); });
    report("symmetry verify", ts, tp, std::abs(vs.max_deviation - vp.max_deviation));
  }
  {
    std::vector<std::pair<double, RealVector>> bs, bp;
    double ts = timed([&] { bs = band_structure(model, grid, Exec::Serial); });
    double tp = timed([&] { bp = band_structure(model, grid, Exec::Parallel); });
    double diff = 0.0;
    for (std::size_t i = 0; i < bs.size(); ++i)
      diff = std::max(diff, (bs[i].second - bp[i].second).norm());
    report("band structure", ts, tp, diff);
  }
  {
    TransportResult trs, trp;
    double ts = timed([&] { trs = parallel_transport(model, 2048, Exec::Serial); });
    double tp = timed([&] { trp = parallel_transport(model, 2048, Exec::Parallel); });
    report("transport (M = 2048)", ts, tp,
           (trs.holonomy - trp.holonomy).norm());
  }
  {
    PresetModel other = make_bench_model(6, 6, 54321);
    ModelPath path{model, other.model, preset.symmetries, 17};
    SweepOptions opt;
    opt.transport_steps = 256;
    opt.gap_grid = 512;
    SweepResult rs, rp;
    opt.exec = Exec::Serial;
    double ts = timed([&] { rs = sweep(path, opt); });
    opt.exec = Exec::Parallel;
    double tp = timed([&] { rp = sweep(path, opt); });
    double diff = 0.0;
    for (std::size_t i = 0; i < rs.samples.size(); ++i)
      diff = std::max(diff, std::abs(rs.samples[i].gap_width - rp.samples[i].gap_width));
    report("sweep (17 samples)", ts, tp, diff);
  }
  return 0;
}
