#include "zakchain/linalg.hpp"

#include <Eigen/SVD>
#include <cmath>

namespace zakchain {

Matrix polar_unitary(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

double unitarity_defect(const Matrix& u) {
  return (u.adjoint() * u - Matrix::Identity(u.rows(), u.cols())).norm();
}

Matrix hermitize(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

double wrap_to_period(double k) {
  double w = std::fmod(k, two_pi);
  if (w < 0.0) w += two_pi;
  return w;
}

double phase_in_period(const Complex& z) {
  double phi = std::arg(z);
  if (phi < 0.0) phi += two_pi;
  if (phi >= two_pi) phi = 0.0;
  return phi;
}

} // namespace zakchain
