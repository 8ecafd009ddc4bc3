#include "shapest/shape_algebra.hpp"

#include <cmath>
#include <sstream>

namespace shapest {

namespace {

void require_square(const Matrix& a, const char* what) {
  if (a.rows() != a.cols() || a.rows() < 1) {
    std::ostringstream msg;
    msg << what << ": expected a square matrix, got " << a.rows() << "x"
        << a.cols();
    throw std::invalid_argument(msg.str());
  }
}

void require_symmetric(const Matrix& a, const char* what) {
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    std::ostringstream msg;
    msg << what << ": matrix is not symmetric";
    throw std::invalid_argument(msg.str());
  }
}

// Spectral decomposition with the PD guard shared by spd_sqrt/spd_inv_sqrt.
Eigen::SelfAdjointEigenSolver<Matrix> spd_eigen(const Matrix& a,
                                                const char* what) {
  require_square(a, what);
  require_symmetric(a, what);
  Eigen::SelfAdjointEigenSolver<Matrix> es(a);
  const Vector& ev = es.eigenvalues();
  const double floor = 1e-12 * ev.maxCoeff();
  if (ev.minCoeff() <= floor) {
    std::ostringstream msg;
    msg << what << ": matrix is not positive definite (eigenvalue "
        << ev.minCoeff() << " below tolerance " << floor << ")";
    throw std::domain_error(msg.str());
  }
  return es;
}

}  // namespace

Matrix spd_sqrt(const Matrix& a) {
  auto es = spd_eigen(a, "spd_sqrt");
  Matrix s = es.eigenvectors() *
             es.eigenvalues().cwiseSqrt().asDiagonal() *
             es.eigenvectors().transpose();
  return 0.5 * (s + s.transpose());
}

Matrix spd_inv_sqrt(const Matrix& a) {
  auto es = spd_eigen(a, "spd_inv_sqrt");
  Matrix s = es.eigenvectors() *
             es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
             es.eigenvectors().transpose();
  return 0.5 * (s + s.transpose());
}

Matrix normalize_shape(const Matrix& a) {
  require_square(a, "normalize_shape");
  const double a11 = a(0, 0);
  if (!(a11 > 0.0)) {
    std::ostringstream msg;
    msg << "normalize_shape: (1,1) entry must be positive, got " << a11;
    throw std::domain_error(msg.str());
  }
  Matrix v = a / a11;
  v(0, 0) = 1.0;
  return v;
}

Vector vech(const Matrix& a) {
  require_square(a, "vech");
  const Eigen::Index k = a.rows();
  Vector v(k * (k + 1) / 2);
  Eigen::Index idx = 0;
  for (Eigen::Index j = 0; j < k; ++j)
    for (Eigen::Index i = 0; i <= j; ++i) v(idx++) = a(i, j);
  return v;
}

Matrix unvech(const Vector& v) {
  const auto m = v.size();
  const auto k = static_cast<Eigen::Index>(
      std::llround((std::sqrt(8.0 * static_cast<double>(m) + 1.0) - 1.0) / 2.0));
  if (k * (k + 1) / 2 != m) {
    std::ostringstream msg;
    msg << "unvech: length " << m << " is not a triangular number";
    throw std::invalid_argument(msg.str());
  }
  Matrix a(k, k);
  Eigen::Index idx = 0;
  for (Eigen::Index j = 0; j < k; ++j)
    for (Eigen::Index i = 0; i <= j; ++i) {
      a(i, j) = v(idx);
      a(j, i) = v(idx);
      ++idx;
    }
  return a;
}

bool is_shape_matrix(const Matrix& v, double tol) {
  if (v.rows() != v.cols() || v.rows() < 2) return false;
  if (std::abs(v(0, 0) - 1.0) > 0.0) return false;
  if ((v - v.transpose()).cwiseAbs().maxCoeff() > tol) return false;
  Eigen::SelfAdjointEigenSolver<Matrix> es(v);
  return es.eigenvalues().minCoeff() > 1e-12 * es.eigenvalues().maxCoeff();
}

}  // namespace shapest
