#pragma once

#include "shapest/radial_scores.hpp"

#include <string>
#include <vector>

namespace shapest {

// Asymptotic relative efficiencies of the f1-score one-step R-estimator
// under radial density g1:
//   vs Tyler:     J_k(f1,g1)^2 / (k^2 J_k(f1))
//   vs Gaussian:  (1 + kappa_k(g1)) J_k(f1,g1)^2 / (k(k+2) J_k(f1)),
// infinite when g1 has no finite fourth radial moment.
double are_vs_tyler(const ScoreFamily& f1, const RadialFamily& g1, int k,
                    const QuadratureSpec& quad = {});
double are_vs_gaussian(const ScoreFamily& f1, const RadialFamily& g1, int k,
                       const QuadratureSpec& quad = {});

// Closed-form nu -> 0 limits of the ARE vs Tyler under t_nu:
//   student(nu0) scores: k (k + nu0 + 2) / ((k+2)(k + nu0))
//   van der Waerden:     k / (k+2)
// Both are < 1. Throws std::invalid_argument for other families.
double are_limit_nu0(const ScoreFamily& f1, int k);

struct AreCell {
  ScoreFamily f1;
  int k = 0;
  bool is_nu0_limit = false;  // the t_0 limit column (vs Tyler only)
  RadialFamily g1;            // ignored when is_nu0_limit
  double vs_tyler = 0.0;
  double vs_gaussian = 0.0;   // +inf marker when kappa(g1) is infinite
};

std::vector<AreCell> are_table(const std::vector<int>& ks,
                               const std::vector<ScoreFamily>& scores,
                               const std::vector<RadialFamily>& under,
                               bool include_nu0_limits = true,
                               const QuadratureSpec& quad = {});

// CSV rendering: columns scores,k,under,are_vs_tyler,are_vs_gaussian with
// "inf" for the infinity marker and "t:0" for the limit column.
std::string render_are_csv(const std::vector<AreCell>& cells);

}  // namespace shapest
