#include "zakchain/transport.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "zakchain/linalg.hpp"
#include "zakchain/parallel.hpp"

namespace zakchain {

HolonomyLog holonomy_log(const Matrix& unitary, const Tolerances& tol,
                         double cluster_width) {
  const int n = unitary.rows();
  const double width = std::max(cluster_width, tol.phase_cluster);
  if (unitary.rows() != unitary.cols())
    throw ValidationError("holonomy logarithm needs a square matrix");
  double defect = unitarity_defect(unitary);
  if (defect > tol.unit)
    throw ValidationError("holonomy logarithm input is not unitary within tolerance");

  // A unitary matrix is normal, so its Schur form is diagonal up to the
  // unitarity defect and the Schur vectors give an orthonormal eigenbasis.
  Eigen::ComplexSchur<Matrix> schur(unitary);
  if (schur.info() != Eigen::Success)
    throw NumericalError("Schur decomposition of the holonomy failed");

  HolonomyLog out;
  out.vectors = schur.matrixU();
  out.phases = RealVector(n);
  for (int i = 0; i < n; ++i) out.phases(i) = phase_in_period(schur.matrixT()(i, i));

  // Collapse eigenphase clusters to a joint value: phases closer than the
  // cluster tolerance are treated as one degenerate eigenvalue. Clustering
  // is circular, so a holonomy eigenvalue sitting at the branch point 1
  // (phases epsilon and 2 pi - epsilon) collapses as well, keeping X an
  // honest function of the holonomy. Moving such a cluster across the cut
  // shifts the Zak phase by an integer, which is the documented ambiguity.
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return out.phases(a) < out.phases(b); });
  std::vector<std::vector<int>> clusters;
  int start = 0;
  while (start < n) {
    int end = start + 1;
    while (end < n && out.phases(order[end]) - out.phases(order[end - 1]) < width)
      ++end;
    clusters.emplace_back(order.begin() + start, order.begin() + end);
    start = end;
  }
  if (clusters.size() > 1) {
    double wrap_gap = out.phases(clusters.front().front()) + two_pi -
                      out.phases(clusters.back().back());
    if (wrap_gap < width) {
      clusters.back().insert(clusters.back().end(), clusters.front().begin(),
                             clusters.front().end());
      clusters.erase(clusters.begin());
    }
  }
  for (const std::vector<int>& cluster : clusters) {
    if (cluster.size() < 2) continue;
    Complex direction = 0.0;
    for (int idx : cluster) direction += std::exp(Complex(0.0, out.phases(idx)));
    double joint = phase_in_period(direction);
    for (int idx : cluster) out.phases(idx) = joint;
  }

  out.x = hermitize(out.vectors *
                    out.phases.cast<Complex>().asDiagonal().toDenseMatrix() *
                    out.vectors.adjoint());

  Matrix rebuilt =
      out.vectors *
      out.phases.unaryExpr([](double p) { return std::exp(Complex(0.0, p)); })
          .asDiagonal()
          .toDenseMatrix() *
      out.vectors.adjoint();
  out.reconstruction = (rebuilt - unitary).norm();
  // collapsing a cluster of width w perturbs e^{iX} by at most ~w
  if (out.reconstruction > tol.intw + 2.0 * std::sqrt(static_cast<double>(n)) * width)
    throw NumericalError("e^{iX} fails to reproduce the holonomy unitary");
  return out;
}

Matrix TransportResult::initial_projector() const {
  const int n = initial_basis.rows();
  Matrix p = Matrix::Zero(n, n);
  for (int i = 0; i < occupied_rank; ++i)
    p += initial_basis.col(i) * initial_basis.col(i).adjoint();
  return p;
}

Matrix TransportResult::phase_twist(double k) const {
  return log.vectors *
         log.phases.unaryExpr([k](double p) { return std::exp(Complex(0.0, -k * p / two_pi)); })
             .asDiagonal()
             .toDenseMatrix() *
         log.vectors.adjoint();
}

Matrix TransportResult::bloch_basis(int index) const {
  return transport[index] * phase_twist(grid[index]) * initial_basis;
}

Matrix TransportResult::bloch_basis_at(double k) const {
  double w = (k == two_pi) ? two_pi : wrap_to_period(k);
  const double h = two_pi / steps();
  int index = static_cast<int>(std::lround(w / h));
  index = std::clamp(index, 0, steps());
  return bloch_basis(index);
}

std::vector<Matrix> integrate_transport(const ProjectorFamily& family, int dim,
                                        int steps, double k_start, Matrix start,
                                        Exec exec) {
  if (steps < 64) throw ValidationError("transport integration needs at least 64 steps");
  const double h = two_pi / steps;
  if (start.size() == 0) start = Matrix::Identity(dim, dim);

  std::vector<Matrix> samples(steps + 1);
  samples[0] = start;

  // Half-step generator grid, precomputed in parallel chunks; the RK4
  // recursion below consumes it sequentially.
  const int chunk_steps = 512;
  Matrix t = start;
  for (int block = 0; block < steps; block += chunk_steps) {
    const int nsteps = std::min(chunk_steps, steps - block);
    const int npoints = 2 * nsteps + 1;
    std::vector<Matrix> gen(npoints);
    for_each_index(npoints, exec, [&](int i) {
      double k = k_start + (block + 0.5 * i) * h;
      auto [p, dp] = family(k);
      gen[i] = dp * p - p * dp;
    });
    for (int s = 0; s < nsteps; ++s) {
      const Matrix& g0 = gen[2 * s];
      const Matrix& gh = gen[2 * s + 1];
      const Matrix& g1 = gen[2 * s + 2];
      Matrix k1 = g0 * t;
      Matrix k2 = gh * (t + (0.5 * h) * k1);
      Matrix k3 = gh * (t + (0.5 * h) * k2);
      Matrix k4 = g1 * (t + h * k3);
      t += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      t = polar_unitary(t);
      samples[block + s + 1] = t;
    }
  }
  return samples;
}

int adaptive_transport_steps(int base, double min_abs_energy) {
  if (min_abs_energy >= 0.2) return base;
  double factor = std::min(0.2 / std::max(min_abs_energy, 1e-4), 64.0);
  long steps = std::lround(base * factor);
  return static_cast<int>(std::min<long>(steps, 1 << 17));
}

Matrix initial_basis(const HoppingModel& model, const Tolerances& tol) {
  SpectralData data = spectrum(model, 0.0, tol);
  for (int i = 0; i < data.eigenvalues.size(); ++i)
    if (std::abs(data.eigenvalues(i)) <= tol.gap)
      throw GaplessError("model is gapless at k = 0");
  return data.eigenvectors; // ascending energies put occupied columns first
}

TransportResult parallel_transport(const HoppingModel& model, int steps,
                                   Exec exec, const Tolerances& tol) {
  const int n = model.internal_dim();
  TransportResult tr;

  SpectralData origin = spectrum(model, 0.0, tol);
  for (int i = 0; i < n; ++i)
    if (std::abs(origin.eigenvalues(i)) <= tol.gap)
      throw GaplessError("model is gapless at k = 0");
  tr.initial_basis = origin.eigenvectors;
  tr.initial_energies = origin.eigenvalues;
  tr.occupied_rank = static_cast<int>(
      (origin.eigenvalues.array() < 0.0).count());

  ProjectorFamily family = [&](double k) {
    return projector_with_derivative(model, k, tol);
  };
  tr.transport = integrate_transport(family, n, steps, 0.0, Matrix(), exec);
  tr.grid.resize(steps + 1);
  const double h = two_pi / steps;
  for (int i = 0; i <= steps; ++i) tr.grid[i] = i * h;

  // Defects: unitarity after re-unitarization and intertwining with P_0.
  Matrix p0 = occupied_projector(model, 0.0, tol);
  std::vector<double> unit_dev(steps + 1), intw_dev(steps + 1);
  for_each_index(steps + 1, exec, [&](int i) {
    unit_dev[i] = unitarity_defect(tr.transport[i]);
    Matrix pk = occupied_projector(model, tr.grid[i], tol);
    intw_dev[i] = (pk * tr.transport[i] - tr.transport[i] * p0).norm();
  });
  tr.unitarity_defect = *std::max_element(unit_dev.begin(), unit_dev.end());
  tr.intertwining_defect = *std::max_element(intw_dev.begin(), intw_dev.end());
  if (tr.unitarity_defect > tol.unit) {
    std::ostringstream os;
    os << "transport unitarity drift " << tr.unitarity_defect
       << " exceeds tolerance; increase the step count (M = " << steps << ")";
    throw NumericalError(os.str());
  }

  tr.holonomy = tr.transport.back();
  // Holonomy eigenphases are only trustworthy to the integration accuracy,
  // so the degeneracy width scales with the measured defect.
  double cluster_width =
      std::min(1e-4, std::max(tol.phase_cluster, 50.0 * tr.intertwining_defect));
  tr.log = holonomy_log(tr.holonomy, tol, cluster_width);
  tr.x_commutator = (tr.log.x * p0 - p0 * tr.log.x).norm();
  return tr;
}

TransportReport verify_transport(const TransportResult& tr,
                                 const HoppingModel& model, Exec exec,
                                 const Tolerances& tol) {
  TransportReport report;
  report.unitarity_defect = tr.unitarity_defect;
  report.intertwining_defect = tr.intertwining_defect;

  // Telescopic property: continue the integration one extra period and
  // compare T_{k + 2pi} against T_k T_{2pi} on the sample grid.
  ProjectorFamily family = [&](double k) {
    return projector_with_derivative(model, k, tol);
  };
  std::vector<Matrix> extended =
      integrate_transport(family, model.internal_dim(), tr.steps(), two_pi,
                          tr.holonomy, exec);
  double telescopic = 0.0;
  for (int i = 0; i <= tr.steps(); ++i)
    telescopic = std::max(telescopic,
                          (extended[i] - tr.transport[i] * tr.holonomy).norm());
  report.telescopic_defect = telescopic;
  return report;
}

namespace {

// Transport at -k reconstructed by telescoping: T_{-k} = T_{2pi-k} T_{2pi}^{-1}.
Matrix transport_minus(const TransportResult& tr, int index) {
  return tr.transport[tr.steps() - index] * tr.holonomy.adjoint();
}

Matrix occupied_block_projector(const Matrix& basis, int m) {
  return basis.leftCols(m) * basis.leftCols(m).adjoint();
}

} // namespace

SymmetricBasisReport verify_symmetric_basis(const TransportResult& tr,
                                            const SymmetrySet& set,
                                            int grid_points,
                                            const Tolerances& tol) {
  SymmetricBasisReport report;
  const int n = tr.initial_basis.rows();
  const int m = tr.occupied_rank;
  const int steps = tr.steps();
  const int stride = std::max(1, steps / grid_points);

  for (const SymmetryOperator& op : set.all_operators()) {
    SymmetricBasisCheck check;
    check.label = op.label;
    check.antiunitary = op.antiunitary;
    check.energy_sign = op.energy_sign;
    check.momentum_sign = op.momentum_sign;
    check.square = op.antiunitary ? square_sign(op, tol) : +1;
    check.quaternionic_case = op.antiunitary && check.square == -1;

    // Commutation with the transport unitaries: O T_k = T_{+-k} O.
    double transport_defect = 0.0;
    for (int i = 0; i <= steps; i += stride) {
      Matrix lhs = op.antiunitary ? Matrix(op.matrix * tr.transport[i].conjugate())
                                  : Matrix(op.matrix * tr.transport[i]);
      Matrix rhs = (op.momentum_sign == +1)
                       ? Matrix(tr.transport[i] * op.matrix)
                       : Matrix(transport_minus(tr, i) * op.matrix);
      transport_defect = std::max(transport_defect, (lhs - rhs).norm());
    }
    check.transport_defect = transport_defect;

    // Band-resolved transformation law on the Bloch basis. The energy sign
    // decides the band pairing j <-> N-j+1; the momentum sign decides
    // whether the partner is evaluated at k or -k. Each pair carries one
    // k-independent phase, recorded at k = 0. Bands that are degenerate at
    // k = 0 have no canonical pairing (the reshuffling freedom), so for
    // those the image is only required to lie in the partner cluster's span.
    std::vector<std::pair<int, int>> clusters; // [first, last] band index
    {
      int c0 = 0;
      for (int j = 1; j <= n; ++j) {
        if (j == n || tr.initial_energies(j) - tr.initial_energies(j - 1) > 1e-7) {
          clusters.emplace_back(c0, j - 1);
          c0 = j;
        }
      }
    }
    std::vector<int> cluster_of(n);
    for (std::size_t c = 0; c < clusters.size(); ++c)
      for (int j = clusters[c].first; j <= clusters[c].second; ++j)
        cluster_of[j] = static_cast<int>(c);

    double vector_defect = 0.0;
    double pairing_defect = 0.0;
    double subspace_defect = 0.0;
    check.pair_phases.assign(n, 0.0);
    bool phases_set = false;
    for (int i = 0; i <= steps; i += stride) {
      Matrix vk = tr.bloch_basis(i);
      Matrix vpartner = (op.momentum_sign == +1)
                            ? vk
                            : tr.bloch_basis(steps - i);
      for (int j = 0; j < n; ++j) {
        Vector image = op.apply(vk.col(j));
        int partner = (op.energy_sign == +1) ? j : (n - 1 - j);
        Complex overlap = vpartner.col(partner).dot(image);
        vector_defect = std::max(vector_defect, 1.0 - std::abs(overlap));
        if (!phases_set) check.pair_phases[j] = std::arg(overlap);

        auto [pfirst, plast] = clusters[cluster_of[partner]];
        Matrix span = vpartner.middleCols(pfirst, plast - pfirst + 1);
        Vector residual = image - span * (span.adjoint() * image);
        pairing_defect = std::max(pairing_defect, residual.norm());
      }
      phases_set = true;

      // Subspace-level statement: O maps the occupied span at k onto the
      // occupied (or unoccupied, for energy sign -1) span at +-k.
      Matrix pk = occupied_block_projector(vk, m);
      Matrix image_p = op.conjugate_matrix(pk);
      Matrix target = occupied_block_projector(vpartner, m);
      if (op.energy_sign == -1)
        target = Matrix::Identity(n, n) - target;
      subspace_defect = std::max(subspace_defect, (image_p - target).norm());
    }
    check.vector_defect = vector_defect;
    check.pairing_defect = pairing_defect;
    check.subspace_defect = subspace_defect;

    const double vec_tol = std::max(tol.intw, 10.0 * tr.intertwining_defect);
    check.passed = check.transport_defect < vec_tol &&
                   check.subspace_defect < vec_tol &&
                   (check.quaternionic_case || check.pairing_defect < vec_tol);
    report.all_passed = report.all_passed && check.passed;
    report.checks.push_back(std::move(check));
  }
  return report;
}

} // namespace zakchain
