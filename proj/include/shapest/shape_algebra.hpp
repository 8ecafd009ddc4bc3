#pragma once

#include <Eigen/Dense>

#include <stdexcept>

namespace shapest {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Symmetric positive definite square root via spectral decomposition.
// The symmetric root is required so that conjugation identities such as
// spd_sqrt(O A O') = O spd_sqrt(A) O' hold; a Cholesky factor would not do.
// Throws std::domain_error if A is not symmetric PD (eigenvalue below
// 1e-12 times the largest one).
Matrix spd_sqrt(const Matrix& a);

// Inverse symmetric square root: result T satisfies T * A * T = I.
Matrix spd_inv_sqrt(const Matrix& a);

// Shape normalization V = A / A(0,0). Throws std::domain_error when
// A(0,0) <= 0. The (0,0) entry of the result is exactly 1.
Matrix normalize_shape(const Matrix& a);

// Half-vectorization: stacks the upper triangle (including the diagonal)
// column by column, so vech(A)[0] = A(0,0).
Vector vech(const Matrix& a);

// Inverse of vech. Throws std::invalid_argument when the length is not a
// triangular number.
Matrix unvech(const Vector& v);

// Checks the shape-matrix contract: symmetric, positive definite and
// normalized so that V(0,0) = 1.
bool is_shape_matrix(const Matrix& v, double tol = 1e-9);

}  // namespace shapest
