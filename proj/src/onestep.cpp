#include "shapest/onestep.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace shapest {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// h~(0) below this is treated as an exact zero (the constant-score /
// Tyler-preliminary case, where D vanishes up to the Tyler tolerance).
constexpr double kZeroScore = 1e-14;

double kk2(const Matrix& v) {
  const double k = static_cast<double>(v.rows());
  return k * (k + 2.0);
}

bool is_pd(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(a);
  return es.eigenvalues().minCoeff() > 1e-12 * es.eigenvalues().maxCoeff();
}

}  // namespace

Matrix path_point(const Matrix& x, const Vector& theta, const Matrix& v_pre,
                  const ScoreFamily& f1, double beta) {
  if (beta < 0.0) throw std::domain_error("path_point: beta must be >= 0");
  const Matrix d = shape_score(x, theta, v_pre, f1);
  Matrix v = v_pre + beta * kk2(v_pre) * d;
  if (!is_pd(v)) {
    std::ostringstream msg;
    msg << "path_point: V(beta) leaves the positive definite cone at beta = "
        << beta;
    throw std::domain_error(msg.str());
  }
  return v;
}

double h_tilde(const Matrix& x, const Vector& theta, const Matrix& v_pre,
               const ScoreFamily& f1, double beta) {
  const Matrix d0 = shape_score(x, theta, v_pre, f1);
  if (beta == 0.0) return vech(d0).squaredNorm();
  const Matrix v = v_pre + beta * kk2(v_pre) * d0;
  if (!is_pd(v)) return kNegInf;
  const Matrix db = shape_score(x, theta, v, f1);
  return vech(d0).dot(vech(db));
}

double beta_star(const Matrix& x, const Vector& theta, const Matrix& v_pre,
                 const ScoreFamily& f1, const OneStepConfig& cfg,
                 int* h_evals) {
  const double scale = kk2(v_pre);
  int evals = 0;
  const auto h = [&](double beta) {
    ++evals;
    return h_tilde(x, theta, v_pre, f1, beta);
  };

  const double h0 = h(0.0);
  if (h0 <= kZeroScore) {
    if (h_evals) *h_evals = evals;
    return 0.0;
  }

  double result;
  try {
    result = find_leftmost_crossing(h, cfg.coarse_step / scale,
                                    cfg.beta_max_init / scale, cfg.growth,
                                    cfg.beta_cap / scale, cfg.bisection_tol);
  } catch (...) {
    if (h_evals) *h_evals = evals;
    throw;
  }
  if (h_evals) *h_evals = evals;
  return result;
}

double find_leftmost_crossing(const std::function<double(double)>& h,
                              double step, double window, double growth,
                              double cap, double tol) {
  // coarse forward scan, window and step growing geometrically up to the cap
  double lo = 0.0;
  double hi = 0.0;
  bool bracketed = false;
  double beta = step;
  while (beta <= cap) {
    if (h(beta) <= 0.0) {
      hi = beta;
      bracketed = true;
      break;
    }
    lo = beta;
    if (beta >= window) {
      window *= growth;
      step *= growth;
    }
    beta += step;
  }
  if (!bracketed) {
    std::ostringstream msg;
    msg << "find_leftmost_crossing: h did not cross zero below the cap "
        << cap;
    throw std::runtime_error(msg.str());
  }

  // bisection maintaining h(lo) > 0 >= h(hi); converges to the leftmost
  // crossing even across the jumps of the piecewise continuous h
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (h(mid) <= 0.0)
      hi = mid;
    else
      lo = mid;
  }
  return lo;  // h > 0 (and the path PD) guaranteed on the returned side
}

OneStepResult r_estimate(const Matrix& x, const OneStepConfig& cfg) {
  OneStepResult out;
  if (cfg.theta.has_value()) {
    out.theta = *cfg.theta;
  } else {
    out.theta = hr_median(x).theta;
  }

  if (cfg.preliminary == OneStepConfig::Preliminary::tyler)
    out.V_pre = tyler_shape(x, out.theta, cfg.tyler_tol, cfg.tyler_max_iter).V;
  else
    out.V_pre = gaussian_shape(x).V;

  try {
    out.beta_star =
        beta_star(x, out.theta, out.V_pre, cfg.f1, cfg, &out.h_evaluations);
  } catch (const std::runtime_error&) {
    out.fallback = true;
    out.beta_star = 0.0;
  }

  out.alpha_star = out.beta_star > 0.0
                       ? 1.0 / out.beta_star
                       : std::numeric_limits<double>::infinity();
  if (out.beta_star > 0.0) {
    const Matrix d = shape_score(x, out.theta, out.V_pre, cfg.f1);
    out.V = out.V_pre + out.beta_star * kk2(out.V_pre) * d;
  } else {
    out.V = out.V_pre;
  }
  return out;
}

double naive_cross_info(const Matrix& x, const Vector& theta,
                        const Matrix& v_pre, const ScoreFamily& f1,
                        const Matrix& v) {
  if (v.rows() != v_pre.rows() || v.cols() != v_pre.cols())
    throw std::invalid_argument("naive_cross_info: dimension mismatch");
  if ((v - v.transpose()).cwiseAbs().maxCoeff() > 1e-12)
    throw std::invalid_argument("naive_cross_info: v must be symmetric");
  if (v(0, 0) != 0.0)
    throw std::invalid_argument("naive_cross_info: v(0,0) must be 0");
  const double vnorm = vech(v).norm();
  if (!(vnorm > 0.0))
    throw std::invalid_argument("naive_cross_info: v must be nonzero");

  const double sqrtn = std::sqrt(static_cast<double>(x.rows()));
  const Matrix perturbed = v_pre + v / sqrtn;
  if (!is_pd(perturbed))
    throw std::domain_error("naive_cross_info: perturbed matrix is not PD");

  const Matrix d0 = shape_score(x, theta, v_pre, f1);
  const Matrix d1 = shape_score(x, theta, perturbed, f1);
  return sqrtn * kk2(v_pre) * (vech(d1) - vech(d0)).norm() / vnorm;
}

}  // namespace shapest
