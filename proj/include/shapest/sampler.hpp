#pragma once

#include "shapest/radial_scores.hpp"
#include "shapest/rng.hpp"
#include "shapest/shape_algebra.hpp"

#include <cstdint>

namespace shapest {

// Data-generating elliptical law X = theta + sigma * r * V^{1/2} * S with
// S uniform on the unit sphere:
//   gaussian           r^2 ~ chi-square(k)
//   student(nu)        X = theta + sigma V^{1/2} Z / sqrt(W/nu)
//   power-exp(eta)     r^{2 eta} ~ Gamma(k/(2 eta), 1)
struct RadialModel {
  RadialFamily family;
  int k = 2;
  Vector theta;        // defaults to 0
  double sigma = 1.0;
  Matrix V;            // shape matrix, defaults to I_k

  static RadialModel spherical(const RadialFamily& family, int k);
};

// n x k sample, deterministic for fixed (model, n, seed, rep). The draw for
// observation i uses the substream mix_key(seed, rep, i), so replications
// can be generated in any order or in parallel.
Matrix sample(const RadialModel& model, int n, std::uint64_t seed,
              std::uint64_t rep = 0);

// Standardized draw (theta = 0, sigma = 1, V = I) for observation stream.
Vector standardized_draw(const RadialFamily& family, int k, ObsRng& rng);

// Uniform draw on the unit sphere in R^k.
Vector sphere_uniform(int k, ObsRng& rng);

}  // namespace shapest
