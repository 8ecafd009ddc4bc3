#pragma once

#include "shapest/base_estimators.hpp"

#include <functional>
#include <optional>

namespace shapest {

// One-step R-estimation of shape: follow the rank-score path
//   V(beta) = V_pre + beta * k(k+2) * D_{f1}(V_pre)
// until the local-likelihood function h crosses zero; 1/beta* estimates the
// cross-information J_k(f1, g1).
struct OneStepConfig {
  ScoreFamily f1;
  enum class Preliminary { tyler, gaussian };
  Preliminary preliminary = Preliminary::tyler;
  // Location: known theta when set, Hettmansperger-Randles plug-in otherwise.
  std::optional<Vector> theta;

  // beta search grid, all in units of 1/(k(k+2)).
  double coarse_step = 0.05;
  double beta_max_init = 2.0;
  double growth = 2.0;
  double beta_cap = 1e4;
  double bisection_tol = 1e-8;

  double tyler_tol = 1e-9;
  int tyler_max_iter = 500;
};

struct OneStepResult {
  Matrix V;
  Matrix V_pre;
  double beta_star = 0.0;
  double alpha_star = 0.0;  // 1/beta*, +inf marker when beta* = 0
  int h_evaluations = 0;
  bool fallback = false;    // no h-crossing before the cap; V = V_pre
  Vector theta;             // location actually used
};

// Point on the one-step path. Throws std::domain_error when V(beta) leaves
// the positive definite cone.
Matrix path_point(const Matrix& x, const Vector& theta, const Matrix& v_pre,
                  const ScoreFamily& f1, double beta);

// Sign-equivalent local-likelihood function
//   h~(beta) = <vech(D(V_pre)), vech(D(V(beta)))>,
// equal to h(beta) of the Upsilon-Delta formulation divided by the positive
// constant n k^2 (k+2)^2. Returns -inf when V(beta) is not PD (path exit,
// treated as an h <= 0 event).
double h_tilde(const Matrix& x, const Vector& theta, const Matrix& v_pre,
               const ScoreFamily& f1, double beta);

// Leftmost sign change of h~: coarse forward scan then bisection on the
// bracket. Throws std::runtime_error when no crossing occurs below the cap.
double beta_star(const Matrix& x, const Vector& theta, const Matrix& v_pre,
                 const ScoreFamily& f1, const OneStepConfig& cfg,
                 int* h_evals = nullptr);

// Search core, factored out so it can be exercised on synthetic functions:
// scans forward from 0 in steps of `step` (step and window growing by
// `growth` past `window`, up to `cap`), then bisects the bracketing
// interval to `tol`, maintaining h(lo) > 0 >= h(hi). Returns the lo side of
// the final bracket. Requires h(0) > 0.
double find_leftmost_crossing(const std::function<double(double)>& h,
                              double step, double window, double growth,
                              double cap, double tol);

OneStepResult r_estimate(const Matrix& x, const OneStepConfig& cfg);

// Naive linearity-based cross-information estimate for a perturbation
// direction v (symmetric, v(0,0) = 0):
//   alpha*(v) = sqrt(n) k(k+2) ||vech(D(V_pre + v/sqrt(n))) - vech(D(V_pre))||
//               / ||vech(v)||.
// Diagnostic quality only: the result depends on the arbitrary scale of v.
double naive_cross_info(const Matrix& x, const Vector& theta,
                        const Matrix& v_pre, const ScoreFamily& f1,
                        const Matrix& v);

}  // namespace shapest
