#include "shapest/base_estimators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace shapest {

namespace {

void require_data(const Matrix& x, const char* what) {
  if (x.cols() < 2)
    throw std::invalid_argument(std::string(what) + ": need k >= 2 columns");
  if (x.rows() < 1)
    throw std::invalid_argument(std::string(what) + ": empty sample");
}

double sign_residual(const Matrix& u, int k) {
  const double n = static_cast<double>(u.rows());
  Matrix s = (static_cast<double>(k) / n) * (u.transpose() * u);
  return (s - Matrix::Identity(k, k)).norm();
}

}  // namespace

RanksSigns ranks_signs(const Matrix& x, const Vector& theta, const Matrix& v) {
  require_data(x, "ranks_signs");
  const auto n = x.rows();
  const auto k = x.cols();
  if (theta.size() != k)
    throw std::invalid_argument("ranks_signs: theta dimension mismatch");
  const Matrix t = spd_inv_sqrt(v);

  RanksSigns rs;
  rs.d.resize(n);
  rs.U.resize(n, k);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Vector z = t * (x.row(i).transpose() - theta);
    const double di = z.norm();
    if (di <= 0.0) {
      std::ostringstream msg;
      msg << "ranks_signs: observation " << i << " coincides with theta";
      throw std::domain_error(msg.str());
    }
    rs.d(i) = di;
    rs.U.row(i) = (z / di).transpose();
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (rs.d(a) != rs.d(b)) return rs.d(a) < rs.d(b);
    return a < b;  // deterministic tie break by observation index
  });
  rs.ranks.assign(n, 0);
  for (int r = 0; r < static_cast<int>(n); ++r) rs.ranks[order[r]] = r + 1;
  return rs;
}

EstimatorReport tyler_shape(const Matrix& x, const Vector& theta, double tol,
                            int max_iter) {
  require_data(x, "tyler_shape");
  const auto n = x.rows();
  const auto k = x.cols();
  if (n <= k)
    throw std::invalid_argument("tyler_shape: need n > k observations");

  Matrix sigma = Matrix::Identity(k, k);
  EstimatorReport rep;
  rep.method = "tyler";
  for (int it = 1; it <= max_iter; ++it) {
    RanksSigns rs = ranks_signs(x, theta, sigma);  // throws on degeneracy
    rep.iterations = it;
    rep.residual = sign_residual(rs.U, static_cast<int>(k));
    if (rep.residual <= tol) {
      rep.V = sigma;
      return rep;
    }
    Matrix s = Matrix::Zero(k, k);
    const Matrix inv = sigma.inverse();
    for (Eigen::Index i = 0; i < n; ++i) {
      const Vector c = x.row(i).transpose() - theta;
      const double q = c.dot(inv * c);
      if (!(q > 0.0))
        throw std::domain_error("tyler_shape: singular iterate");
      s += c * c.transpose() / q;
    }
    s *= static_cast<double>(k) / static_cast<double>(n);
    sigma = normalize_shape(0.5 * (s + s.transpose()));
  }
  std::ostringstream msg;
  msg << "tyler_shape: no convergence after " << max_iter
      << " iterations (residual " << rep.residual << ")";
  throw std::runtime_error(msg.str());
}

EstimatorReport gaussian_shape(const Matrix& x) {
  require_data(x, "gaussian_shape");
  const auto n = x.rows();
  if (n < 2) throw std::invalid_argument("gaussian_shape: need n >= 2");
  const Vector mean = x.colwise().mean().transpose();
  const Matrix centered = x.rowwise() - mean.transpose();
  Matrix sigma =
      centered.transpose() * centered / static_cast<double>(n - 1);
  if (!(sigma(0, 0) > 0.0))
    throw std::domain_error(
        "gaussian_shape: zero variance in first coordinate");
  EstimatorReport rep;
  rep.method = "gaussian";
  rep.iterations = 0;
  rep.residual = 0.0;
  rep.V = normalize_shape(sigma);
  return rep;
}

LocationShape hr_median(const Matrix& x, double tol, int max_iter) {
  require_data(x, "hr_median");
  const auto n = x.rows();
  const auto k = x.cols();
  if (n <= k) throw std::invalid_argument("hr_median: need n > k");

  Vector theta = x.colwise().mean().transpose();
  Matrix v = Matrix::Identity(k, k);
  LocationShape out;
  double sign_sum = std::numeric_limits<double>::infinity();

  for (int it = 1; it <= max_iter; ++it) {
    out.iterations = it;

    // one Tyler scatter sweep at fixed theta
    {
      Matrix s = Matrix::Zero(k, k);
      const Matrix inv = v.inverse();
      for (Eigen::Index i = 0; i < n; ++i) {
        const Vector c = x.row(i).transpose() - theta;
        const double q = c.dot(inv * c);
        if (!(q > 0.0)) throw std::domain_error("hr_median: singular iterate");
        s += c * c.transpose() / q;
      }
      s *= static_cast<double>(k) / static_cast<double>(n);
      v = normalize_shape(0.5 * (s + s.transpose()));
    }

    // location step theta <- theta + V^{1/2} ubar / mbar, halved on overshoot
    RanksSigns rs = ranks_signs(x, theta, v);
    Vector ubar = rs.U.colwise().mean().transpose();
    const double mbar = rs.d.cwiseInverse().mean();
    sign_sum = ubar.norm();
    const Matrix vhalf = spd_sqrt(v);

    double damp = 1.0;
    for (int half = 0; half < 30; ++half) {
      const Vector cand = theta + damp * (vhalf * ubar) / mbar;
      const RanksSigns trial = ranks_signs(x, cand, v);
      const double trial_sum = trial.U.colwise().mean().norm();
      if (trial_sum < sign_sum) {
        theta = cand;
        sign_sum = trial_sum;
        break;
      }
      damp *= 0.5;
    }

    const double tyler_res = sign_residual(ranks_signs(x, theta, v).U,
                                           static_cast<int>(k));
    out.residual = std::max(sign_sum, tyler_res);
    if (out.residual <= tol) {
      out.theta = theta;
      out.V = v;
      return out;
    }
  }
  std::ostringstream msg;
  msg << "hr_median: no convergence after " << max_iter
      << " iterations (residual " << out.residual << ")";
  throw std::runtime_error(msg.str());
}

Matrix rank_weighted_scatter(const Matrix& x, const Vector& theta,
                             const Matrix& v, const ScoreFamily& f1) {
  const RanksSigns rs = ranks_signs(x, theta, v);
  const auto n = x.rows();
  const auto k = x.cols();
  Matrix s = Matrix::Zero(k, k);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double w = score_K(
        f1, static_cast<int>(k),
        static_cast<double>(rs.ranks[i]) / static_cast<double>(n + 1));
    s += w * rs.U.row(i).transpose() * rs.U.row(i);
  }
  s /= static_cast<double>(n);
  const Matrix vhalf = spd_sqrt(v);
  Matrix w = vhalf * s * vhalf;
  return 0.5 * (w + w.transpose());
}

Matrix shape_score(const Matrix& x, const Vector& theta, const Matrix& v,
                   const ScoreFamily& f1) {
  Matrix w = rank_weighted_scatter(x, theta, v, f1);
  Matrix d = w - w(0, 0) * v;
  d(0, 0) = 0.0;
  return d;
}

SphericityResult sphericity_stat(const Matrix& x, const Vector& theta,
                                 const Matrix& v0, const ScoreFamily& f1) {
  const RanksSigns rs = ranks_signs(x, theta, v0);
  const auto n = x.rows();
  const int k = static_cast<int>(x.cols());
  Matrix s = Matrix::Zero(k, k);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double w = score_K(
        f1, k, static_cast<double>(rs.ranks[i]) / static_cast<double>(n + 1));
    s += w * rs.U.row(i).transpose() * rs.U.row(i);
  }
  s /= static_cast<double>(n);

  const double kd = static_cast<double>(k);
  const double tr = s.trace();
  const double q_of_s = (s * s).trace() - tr * tr / kd;
  SphericityResult res;
  res.Q = static_cast<double>(n) * kd * (kd + 2.0) /
          (2.0 * score_norm(f1, k)) * q_of_s;
  if (res.Q < 0.0 && res.Q > -1e-12) res.Q = 0.0;
  res.df = k * (k + 1) / 2 - 1;
  res.p_value = 1.0 - chi2_cdf(static_cast<double>(res.df), res.Q);
  return res;
}

}  // namespace shapest
