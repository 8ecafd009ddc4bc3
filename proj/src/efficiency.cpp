#include "shapest/efficiency.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace shapest {

double are_vs_tyler(const ScoreFamily& f1, const RadialFamily& g1, int k,
                    const QuadratureSpec& quad) {
  const double j = cross_info(f1, g1, k, quad);
  const double kd = static_cast<double>(k);
  return j * j / (kd * kd * score_norm(f1, k));
}

double are_vs_gaussian(const ScoreFamily& f1, const RadialFamily& g1, int k,
                       const QuadratureSpec& quad) {
  const RadialMoments m = radial_moments(g1, k, quad);
  if (m.infinite_kurtosis) return std::numeric_limits<double>::infinity();
  const double j = cross_info(f1, g1, k, quad);
  const double kd = static_cast<double>(k);
  return (1.0 + m.kappa) * j * j / (kd * (kd + 2.0) * score_norm(f1, k));
}

double are_limit_nu0(const ScoreFamily& f1, int k) {
  const double kd = static_cast<double>(k);
  switch (f1.kind) {
    case ScoreKind::van_der_waerden:
      return kd / (kd + 2.0);
    case ScoreKind::student: {
      const double nu0 = f1.param;
      return kd * (kd + nu0 + 2.0) / ((kd + 2.0) * (kd + nu0));
    }
    default:
      throw std::invalid_argument(
          "are_limit_nu0: defined only for student and van der Waerden "
          "scores");
  }
}

std::vector<AreCell> are_table(const std::vector<int>& ks,
                               const std::vector<ScoreFamily>& scores,
                               const std::vector<RadialFamily>& under,
                               bool include_nu0_limits,
                               const QuadratureSpec& quad) {
  std::vector<AreCell> cells;
  for (const auto& f1 : scores)
    for (int k : ks) {
      if (include_nu0_limits) {
        AreCell c;
        c.f1 = f1;
        c.k = k;
        c.is_nu0_limit = true;
        c.vs_tyler = are_limit_nu0(f1, k);
        c.vs_gaussian = std::numeric_limits<double>::infinity();
        cells.push_back(c);
      }
      for (const auto& g1 : under) {
        AreCell c;
        c.f1 = f1;
        c.k = k;
        c.g1 = g1;
        c.vs_tyler = are_vs_tyler(f1, g1, k, quad);
        c.vs_gaussian = are_vs_gaussian(f1, g1, k, quad);
        cells.push_back(c);
      }
    }
  return cells;
}

std::string render_are_csv(const std::vector<AreCell>& cells) {
  std::ostringstream out;
  out << "scores,k,under,are_vs_tyler,are_vs_gaussian\n";
  for (const auto& c : cells) {
    out << to_string(c.f1) << ',' << c.k << ','
        << (c.is_nu0_limit ? std::string("t:0") : to_string(c.g1)) << ','
        << c.vs_tyler << ',';
    if (std::isinf(c.vs_gaussian))
      out << "inf";
    else
      out << c.vs_gaussian;
    out << '\n';
  }
  return out.str();
}

}  // namespace shapest
