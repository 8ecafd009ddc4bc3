#include "shapest/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace shapest {

namespace {
constexpr double kPiHalf = 1.5707963267948966;
constexpr double kTMax = 6.1;  // weights below ~1e-300 beyond this
}  // namespace

double integrate01(const std::function<double(double)>& f,
                   const QuadratureSpec& spec) {
  if (spec.level < 1 || spec.level > 14)
    throw std::invalid_argument("integrate01: level must be in [1, 14]");
  if (!(spec.edge_clip > 0.0 && spec.edge_clip <= 1e-10))
    throw std::invalid_argument("integrate01: edge_clip must be in (0, 1e-10]");

  const double h = 1.0 / static_cast<double>(1 << spec.level);
  const long nmax = static_cast<long>(std::ceil(kTMax / h));
  double sum = 0.0;
  for (long j = -nmax; j <= nmax; ++j) {
    const double t = static_cast<double>(j) * h;
    const double sh = kPiHalf * std::sinh(t);
    const double ch = std::cosh(sh);
    const double w = kPiHalf * std::cosh(t) / (ch * ch);
    double u = 0.5 * (std::tanh(sh) + 1.0);
    u = std::clamp(u, spec.edge_clip, 1.0 - spec.edge_clip);
    sum += w * 0.5 * f(u);
  }
  return sum * h;
}

double integrate01_checked(const std::function<double(double)>& f,
                           const QuadratureSpec& spec, double stability_tol) {
  const double coarse = integrate01(f, spec);
  QuadratureSpec fine = spec;
  fine.level = spec.level + 1;
  const double refined = integrate01(f, fine);
  const double scale = std::max(1.0, std::abs(refined));
  if (std::abs(refined - coarse) > stability_tol * scale) {
    std::ostringstream msg;
    msg << "integrate01_checked: no convergence at level " << spec.level
        << " (" << coarse << " vs " << refined << ")";
    throw std::runtime_error(msg.str());
  }
  return refined;
}

}  // namespace shapest
