#include "shapest/base_estimators.hpp"

#include "shapest/sampler.hpp"
#include "test_helpers.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

using namespace shapest;

namespace {
Matrix sign_moment(const RanksSigns& rs) {
  const int n = static_cast<int>(rs.U.rows());
  return rs.U.transpose() * rs.U / n;
}
}  // namespace

TEST_CASE("ranks_signs basics") {
  const int k = 3, n = 40;
  const Matrix x =
      sample(RadialModel::spherical(RadialFamily::student(3.0), k), n, 21, 0);
  const Vector theta = Vector::Zero(k);
  const Matrix v = Matrix::Identity(k, k);
  const auto rs = ranks_signs(x, theta, v);

  // unit signs, positive distances
  for (int i = 0; i < n; ++i) {
    CHECK(rs.d(i) > 0.0);
    CHECK(std::abs(rs.U.row(i).norm() - 1.0) < 1e-12);
  }

  // ranks are a permutation of 1..n matching the distance order
  std::vector<int> sorted = rs.ranks;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < n; ++i) CHECK(sorted[i] == i + 1);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (rs.d(i) < rs.d(j)) CHECK(rs.ranks[i] < rs.ranks[j]);

  // identity shape: d_i is the plain Euclidean norm
  for (int i = 0; i < n; ++i)
    CHECK(rs.d(i) == doctest::Approx(x.row(i).norm()).epsilon(1e-12));
}

TEST_CASE("ranks_signs ties break by observation index") {
  Matrix x(4, 2);
  x << 1, 0, 0, 1, -1, 0, 2, 0;  // rows 0..2 all at distance 1
  const auto rs = ranks_signs(x, Vector::Zero(2), Matrix::Identity(2, 2));
  CHECK(rs.ranks[0] == 1);
  CHECK(rs.ranks[1] == 2);
  CHECK(rs.ranks[2] == 3);
  CHECK(rs.ranks[3] == 4);
}

TEST_CASE("ranks_signs rejects observations at the center") {
  Matrix x(3, 2);
  x << 1, 0, 0, 0, 0, 1;
  CHECK_THROWS_WITH_AS(
      ranks_signs(x, Vector::Zero(2), Matrix::Identity(2, 2)),
      doctest::Contains("1"), std::domain_error);
}

TEST_CASE("tyler_shape satisfies its fixed-point contract") {
  for (int seed = 0; seed < 20; ++seed) {
    const int k = 2 + seed % 3;
    const Matrix V = normalize_shape(testdata::random_spd(k, 100 + seed));
    RadialModel model;
    model.family = RadialFamily::student(1.0);  // heavy tails on purpose
    model.k = k;
    model.V = V;
    const Matrix x = sample(model, 300, 300 + seed, 0);

    const auto rep = tyler_shape(x, Vector::Zero(k));
    CHECK(rep.residual <= 1e-9);
    CHECK(rep.V(0, 0) == 1.0);
    CHECK(is_shape_matrix(rep.V, 1e-10));

    // re-derive the residual from scratch
    const auto rs = ranks_signs(x, Vector::Zero(k), rep.V);
    const double res =
        (k * sign_moment(rs) - Matrix::Identity(k, k)).norm();
    CHECK(res <= 1e-9);
  }
}

TEST_CASE("tyler_shape is affine equivariant") {
  const int k = 3, n = 200;
  const Matrix x =
      sample(RadialModel::spherical(RadialFamily::student(3.0), k), n, 55, 0);
  const Matrix v0 = tyler_shape(x, Vector::Zero(k)).V;

  for (int seed = 0; seed < 10; ++seed) {
    const Matrix A = testdata::random_invertible(k, 900 + seed);
    const Matrix xa = x * A.transpose();
    const Matrix va = tyler_shape(xa, Vector::Zero(k)).V;
    const Matrix expected = normalize_shape(A * v0 * A.transpose());
    CHECK((va - expected).cwiseAbs().maxCoeff() < 1e-8);
  }

  // scale invariance is the special case A = c I
  const Matrix vs = tyler_shape(7.3 * x, Vector::Zero(k)).V;
  CHECK((vs - v0).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("gaussian_shape is the normalized sample covariance") {
  const int k = 2, n = 150;
  const Matrix x =
      sample(RadialModel::spherical(RadialFamily::gaussian(), k), n, 77, 0);
  const auto rep = gaussian_shape(x);

  const Vector mean = x.colwise().mean();
  const Matrix centered = x.rowwise() - mean.transpose();
  const Matrix cov = centered.transpose() * centered / (n - 1);
  CHECK((rep.V - cov / cov(0, 0)).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(rep.V(0, 0) == 1.0);
}

TEST_CASE("hr_median recovers location and shape jointly") {
  const int k = 2, n = 2000;
  Matrix V(2, 2);
  V << 1.0, 0.6, 0.6, 1.8;
  RadialModel model;
  model.family = RadialFamily::student(2.0);
  model.k = k;
  model.theta = Vector::Constant(k, 3.0);
  model.V = V;
  const Matrix x = sample(model, n, 91, 0);

  const auto fit = hr_median(x);
  CHECK(fit.residual <= 1e-9);
  CHECK((fit.theta - model.theta).cwiseAbs().maxCoeff() < 0.15);
  // loose consistency band: the diagonal entry has a Monte Carlo sd of
  // roughly 0.09 at this n under t_2 tails
  CHECK((fit.V - V).cwiseAbs().maxCoeff() < 0.35);

  // sharp invariant: at the joint fixed point, V is Tyler's shape at theta
  const Matrix vt = tyler_shape(x, fit.theta).V;
  CHECK((fit.V - vt).cwiseAbs().maxCoeff() < 1e-7);

  // shift equivariance: adding a constant shifts theta, leaves V alone
  const Matrix xs = x.rowwise() + Eigen::RowVector2d(-5.0, 2.0);
  const auto fit2 = hr_median(xs);
  CHECK((fit2.theta - (fit.theta + Vector{{-5.0, 2.0}})).cwiseAbs().maxCoeff() <
        1e-6);
  CHECK((fit2.V - fit.V).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("rank_weighted_scatter with constant scores reduces to k * sign moment") {
  const int k = 3, n = 120;
  const Matrix x =
      sample(RadialModel::spherical(RadialFamily::student(3.0), k), n, 13, 0);
  const Matrix v = normalize_shape(testdata::random_spd(k, 14));
  const Vector theta = Vector::Zero(k);

  const Matrix w = rank_weighted_scatter(x, theta, v, ScoreFamily::constant());
  const auto rs = ranks_signs(x, theta, v);
  const Matrix vhalf = spd_sqrt(v);
  const Matrix expected = k * (vhalf * sign_moment(rs) * vhalf);
  CHECK((w - expected).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("shape_score structure") {
  const int k = 3, n = 120;
  const Matrix x =
      sample(RadialModel::spherical(RadialFamily::gaussian(), k), n, 15, 0);
  const Matrix v = normalize_shape(testdata::random_spd(k, 16));
  const Vector theta = Vector::Zero(k);

  for (const auto& f1 : {ScoreFamily::vdw(), ScoreFamily::student(3.0)}) {
    const Matrix d = shape_score(x, theta, v, f1);
    CHECK(d(0, 0) == 0.0);
    CHECK((d - d.transpose()).cwiseAbs().maxCoeff() < 1e-14);
    const Matrix w = rank_weighted_scatter(x, theta, v, f1);
    CHECK((d - (w - w(0, 0) * v)).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("constant-score direction vanishes at the Tyler fit") {
  const int k = 2, n = 250;
  const Matrix x =
      sample(RadialModel::spherical(RadialFamily::student(3.0), k), n, 17, 0);
  const Vector theta = Vector::Zero(k);
  const Matrix vt = tyler_shape(x, theta).V;
  const Matrix d = shape_score(x, theta, vt, ScoreFamily::constant());
  CHECK(d.cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("sphericity statistic sanity") {
  const int k = 3, n = 400;
  const Matrix x =
      sample(RadialModel::spherical(RadialFamily::student(3.0), k), n, 19, 0);
  const Vector theta = Vector::Zero(k);

  const auto ok = sphericity_stat(x, theta, Matrix::Identity(k, k),
                                  ScoreFamily::vdw());
  CHECK(ok.df == k * (k + 1) / 2 - 1);
  CHECK(ok.Q >= 0.0);
  CHECK(ok.p_value > 0.0);
  CHECK(ok.p_value <= 1.0);

  // a grossly wrong null is rejected
  Matrix bad = Matrix::Identity(k, k);
  bad(1, 1) = 8.0;
  const auto rej = sphericity_stat(x, theta, bad, ScoreFamily::vdw());
  CHECK(rej.Q > ok.Q);
  CHECK(rej.p_value < 1e-4);
}
