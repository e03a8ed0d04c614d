#include "zakchain/model.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "zakchain/linalg.hpp"
#include "zakchain/parallel.hpp"

namespace zakchain {

namespace {

std::string offset_msg(int j, const std::string& what) {
  std::ostringstream os;
  os << "hopping offset " << j << ": " << what;
  return os.str();
}

} // namespace

HoppingModel::HoppingModel(int internal_dim, int range,
                           std::map<int, Matrix> hoppings,
                           const Tolerances& tol)
    : internal_dim_(internal_dim), range_(range), norm_scale_(1.0) {
  if (internal_dim_ < 1) throw ValidationError("internal dimension must be positive");
  if (range_ < 0) throw ValidationError("hopping range must be non-negative");

  for (const auto& [j, a] : hoppings) {
    if (std::abs(j) > range_)
      throw ValidationError(offset_msg(j, "outside the declared range"));
    if (a.rows() != internal_dim_ || a.cols() != internal_dim_)
      throw ValidationError(offset_msg(j, "matrix dimension mismatch"));
    auto partner = hoppings.find(-j);
    if (partner != hoppings.end()) {
      if ((partner->second - a.adjoint()).norm() > tol.herm)
        throw ValidationError(offset_msg(j, "A_{-j} != A_j^dagger"));
    }
  }
  // Fill missing partners so both signs are always stored.
  hoppings_ = std::move(hoppings);
  std::vector<std::pair<int, Matrix>> fill;
  for (const auto& [j, a] : hoppings_)
    if (j != 0 && !hoppings_.count(-j)) fill.emplace_back(-j, a.adjoint());
  for (auto& [j, a] : fill) hoppings_.emplace(j, std::move(a));

  double sum = 0.0;
  for (const auto& [j, a] : hoppings_) sum += a.norm();
  norm_scale_ = std::max(1.0, sum); // bounds ||H_k||_F for every k
}

Matrix HoppingModel::hopping(int j) const {
  auto it = hoppings_.find(j);
  if (it != hoppings_.end()) return it->second;
  return Matrix::Zero(internal_dim_, internal_dim_);
}

Matrix fiber_hamiltonian(const HoppingModel& model, double k) {
  Matrix h = Matrix::Zero(model.internal_dim(), model.internal_dim());
  for (const auto& [j, a] : model.hoppings())
    h += std::exp(Complex(0.0, -j * k)) * a;
  return h;
}

Matrix fiber_derivative(const HoppingModel& model, double k) {
  Matrix d = Matrix::Zero(model.internal_dim(), model.internal_dim());
  for (const auto& [j, a] : model.hoppings())
    d += Complex(0.0, -static_cast<double>(j)) * std::exp(Complex(0.0, -j * k)) * a;
  return d;
}

SpectralData spectrum(const HoppingModel& model, double k,
                      const Tolerances& tol) {
  Matrix h = fiber_hamiltonian(model, k);
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
  if (solver.info() != Eigen::Success) {
    std::ostringstream os;
    os << "eigensolver failed to converge at k = " << k;
    throw NumericalError(os.str());
  }
  SpectralData data;
  data.k = k;
  data.eigenvalues = solver.eigenvalues();
  data.eigenvectors = solver.eigenvectors();

  // Deterministic phase fix: rotate each column so its first component of
  // largest modulus is real positive.
  const int n = model.internal_dim();
  for (int col = 0; col < n; ++col) {
    int imax = 0;
    double best = std::abs(data.eigenvectors(0, col));
    for (int row = 1; row < n; ++row) {
      double m = std::abs(data.eigenvectors(row, col));
      if (m > best) {
        best = m;
        imax = row;
      }
    }
    Complex pivot = data.eigenvectors(imax, col);
    data.eigenvectors.col(col) *= std::conj(pivot) / std::abs(pivot);
  }

  double residual =
      (h * data.eigenvectors -
       data.eigenvectors * data.eigenvalues.asDiagonal().toDenseMatrix().cast<Complex>())
          .norm();
  if (residual > tol.eig(h.norm())) {
    std::ostringstream os;
    os << "eigen-residual " << residual << " above tolerance at k = " << k;
    throw NumericalError(os.str());
  }
  return data;
}

namespace {

struct GridPoint {
  double min_abs;
  int rank;
};

GridPoint eval_grid_point(const HoppingModel& model, double k) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(fiber_hamiltonian(model, k),
                                               Eigen::EigenvaluesOnly);
  const RealVector& ev = solver.eigenvalues();
  GridPoint p{std::abs(ev(0)), 0};
  for (int i = 0; i < ev.size(); ++i) {
    p.min_abs = std::min(p.min_abs, std::abs(ev(i)));
    if (ev(i) < 0.0) ++p.rank;
  }
  return p;
}

} // namespace

GapReport gap_at_zero(const HoppingModel& model, int grid_points, Exec exec,
                      const Tolerances& tol) {
  if (grid_points < 16) throw ValidationError("gap scan needs at least 16 grid points");

  const double h = two_pi / grid_points;
  std::vector<GridPoint> pts(grid_points);
  for_each_index(grid_points, exec,
                 [&](int i) { pts[i] = eval_grid_point(model, i * h); });

  int argmin = 0;
  for (int i = 1; i < grid_points; ++i)
    if (pts[i].min_abs < pts[argmin].min_abs) argmin = i;

  // One refinement pass: x8 subdivision of the bracket around the minimizer.
  double k_min = argmin * h;
  double min_abs = pts[argmin].min_abs;
  const double fine = h / 8.0;
  std::vector<GridPoint> fine_pts(17);
  for_each_index(17, exec, [&](int i) {
    fine_pts[i] = eval_grid_point(model, (argmin - 1) * h + i * fine);
  });
  for (int i = 0; i < 17; ++i) {
    if (fine_pts[i].min_abs < min_abs) {
      min_abs = fine_pts[i].min_abs;
      k_min = wrap_to_period((argmin - 1) * h + i * fine);
    }
  }

  GapReport report;
  report.min_abs_energy = min_abs;
  report.gap_width = 2.0 * min_abs;
  report.k_at_min = k_min;
  report.gapped = min_abs > tol.gap;
  report.occupied_rank = pts[0].rank;
  if (report.gapped) {
    for (int i = 1; i < grid_points; ++i) {
      if (pts[i].rank != report.occupied_rank)
        throw NumericalError(
            "occupied rank changes across the k-grid although no gap closing "
            "was detected; the grid is too coarse or the model is gapless");
    }
  }
  return report;
}

Matrix occupied_projector(const HoppingModel& model, double k,
                          const Tolerances& tol) {
  SpectralData data = spectrum(model, k, tol);
  const int n = model.internal_dim();
  Matrix p = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    if (std::abs(data.eigenvalues(i)) <= tol.gap) {
      std::ostringstream os;
      os << "eigenvalue " << data.eigenvalues(i) << " within eps_gap of zero at k = " << k;
      throw GaplessError(os.str());
    }
    if (data.eigenvalues(i) < 0.0)
      p += data.eigenvectors.col(i) * data.eigenvectors.col(i).adjoint();
  }
  return hermitize(p);
}

std::pair<Matrix, Matrix> projector_with_derivative(const HoppingModel& model,
                                                    double k,
                                                    const Tolerances& tol) {
  SpectralData data = spectrum(model, k, tol);
  const int n = model.internal_dim();
  for (int i = 0; i < n; ++i) {
    if (std::abs(data.eigenvalues(i)) <= tol.gap) {
      std::ostringstream os;
      os << "eigenvalue " << data.eigenvalues(i) << " within eps_gap of zero at k = " << k;
      throw GaplessError(os.str());
    }
  }

  Matrix p = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i)
    if (data.eigenvalues(i) < 0.0)
      p += data.eigenvectors.col(i) * data.eigenvectors.col(i).adjoint();

  Matrix dh = fiber_derivative(model, k);
  Matrix dh_basis = data.eigenvectors.adjoint() * dh * data.eigenvectors;
  Matrix q = Matrix::Zero(n, n);
  for (int occ = 0; occ < n; ++occ) {
    if (data.eigenvalues(occ) >= 0.0) continue;
    for (int un = 0; un < n; ++un) {
      if (data.eigenvalues(un) < 0.0) continue;
      Complex amp = dh_basis(un, occ) / (data.eigenvalues(occ) - data.eigenvalues(un));
      q += amp * data.eigenvectors.col(un) * data.eigenvectors.col(occ).adjoint();
    }
  }
  return {hermitize(p), q + q.adjoint()};
}

Matrix projector_derivative(const HoppingModel& model, double k,
                            const Tolerances& tol) {
  return projector_with_derivative(model, k, tol).second;
}

std::vector<std::pair<double, RealVector>> band_structure(
    const HoppingModel& model, int grid_points, Exec exec,
    const Tolerances& tol) {
  if (grid_points < 2) throw ValidationError("band structure needs at least 2 grid points");
  std::vector<std::pair<double, RealVector>> bands(grid_points);
  const double h = two_pi / grid_points;
  for_each_index(grid_points, exec, [&](int i) {
    double k = i * h;
    bands[i] = {k, spectrum(model, k, tol).eigenvalues};
  });
  return bands;
}

} // namespace zakchain
