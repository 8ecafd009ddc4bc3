#pragma once

#include "shapest/radial_scores.hpp"
#include "shapest/shape_algebra.hpp"

#include <string>
#include <vector>

namespace shapest {

// Ranks and multivariate signs of a sample with respect to (theta, V):
// d_i = ||V^{-1/2}(X_i - theta)||, U_i = V^{-1/2}(X_i - theta)/d_i, R_i the
// rank of d_i (smallest distance gets rank 1; ties broken by observation
// index).
struct RanksSigns {
  Vector d;                // n distances, > 0
  std::vector<int> ranks;  // 1..n
  Matrix U;                // n x k, unit rows
};

RanksSigns ranks_signs(const Matrix& x, const Vector& theta, const Matrix& v);

struct EstimatorReport {
  Matrix V;
  int iterations = 0;
  double residual = 0.0;
  std::string method;
};

// Tyler's M-estimator of shape: the fixed point of
// Sigma <- normalize((k/n) sum x x' / (x' Sigma^{-1} x)), started at I,
// reported with the sign-equation residual ||(k/n) sum U U' - I||_F.
EstimatorReport tyler_shape(const Matrix& x, const Vector& theta,
                            double tol = 1e-9, int max_iter = 500);

// Gaussian ML shape: sample covariance (n-1 divisor) normalized to
// unit (1,1) entry.
EstimatorReport gaussian_shape(const Matrix& x);

// Hettmansperger-Randles affine-equivariant median: joint fixed point of
// the sign-sum equation in theta and Tyler's equation in V.
struct LocationShape {
  Vector theta;
  Matrix V;
  int iterations = 0;
  double residual = 0.0;
};

LocationShape hr_median(const Matrix& x, double tol = 1e-9,
                        int max_iter = 500);

// Rank-weighted scatter W_{f1}(V) =
//   V^{1/2} [ (1/n) sum K_{f1}(R_i/(n+1)) U_i U_i' ] V^{1/2}.
Matrix rank_weighted_scatter(const Matrix& x, const Vector& theta,
                             const Matrix& v, const ScoreFamily& f1);

// One-step direction D(V) = W_{f1}(V) - (W_{f1}(V))_11 * V. Symmetric with
// D(0,0) = 0 exactly.
Matrix shape_score(const Matrix& x, const Vector& theta, const Matrix& v,
                   const ScoreFamily& f1);

// Rank-based sphericity test of V = V0: Q = n k(k+2) / (2 J_k(f1)) *
// (tr(S^2) - (tr S)^2 / k) with S the signed-rank statistic, referred to a
// chi-square with k(k+1)/2 - 1 degrees of freedom.
struct SphericityResult {
  double Q = 0.0;
  int df = 0;
  double p_value = 1.0;
};

SphericityResult sphericity_stat(const Matrix& x, const Vector& theta,
                                 const Matrix& v0, const ScoreFamily& f1);

}  // namespace shapest
