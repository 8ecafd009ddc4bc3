#include "shapest/sampler.hpp"

#include <cmath>
#include <stdexcept>

namespace shapest {

RadialModel RadialModel::spherical(const RadialFamily& family, int k) {
  RadialModel m;
  m.family = family;
  m.k = k;
  m.theta = Vector::Zero(k);
  m.sigma = 1.0;
  m.V = Matrix::Identity(k, k);
  return m;
}

Vector sphere_uniform(int k, ObsRng& rng) {
  Vector z(k);
  double norm2;
  do {
    for (int j = 0; j < k; ++j) z(j) = rng.normal();
    norm2 = z.squaredNorm();
  } while (norm2 <= 0.0);
  return z / std::sqrt(norm2);
}

Vector standardized_draw(const RadialFamily& family, int k, ObsRng& rng) {
  Vector z(k);
  for (int j = 0; j < k; ++j) z(j) = rng.normal();
  switch (family.kind) {
    case RadialKind::gaussian:
      return z;
    case RadialKind::student: {
      const double w = rng.chi2(family.param);
      return z / std::sqrt(w / family.param);
    }
    case RadialKind::power_exponential: {
      const double eta = family.param;
      const double g = rng.gamma(static_cast<double>(k) / (2.0 * eta));
      const double r = std::pow(g, 1.0 / (2.0 * eta));
      return r * (z / z.norm());
    }
  }
  throw std::logic_error("standardized_draw: unknown family");
}

Matrix sample(const RadialModel& model, int n, std::uint64_t seed,
              std::uint64_t rep) {
  if (n < 1) throw std::invalid_argument("sample: n must be >= 1");
  if (model.k < 2) throw std::invalid_argument("sample: k must be >= 2");
  if (!(model.sigma > 0.0))
    throw std::invalid_argument("sample: sigma must be positive");
  const Vector theta =
      model.theta.size() == model.k ? model.theta : Vector::Zero(model.k);
  const bool spherical = model.V.size() == 0;
  if (!spherical && !is_shape_matrix(model.V))
    throw std::invalid_argument("sample: V is not a valid shape matrix");
  const Matrix vhalf = spherical ? Matrix::Identity(model.k, model.k)
                                 : spd_sqrt(model.V);

  Matrix x(n, model.k);
  for (int i = 0; i < n; ++i) {
    ObsRng rng(mix_key(seed, rep, static_cast<std::uint64_t>(i)));
    const Vector y = standardized_draw(model.family, model.k, rng);
    x.row(i) = (theta + model.sigma * (vhalf * y)).transpose();
  }
  return x;
}

}  // namespace shapest
