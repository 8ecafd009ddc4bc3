#include "shapest/radial_scores.hpp"

// Evaluate in plain double: the long-double promotion path of this Boost
// version fails to invert the symmetric incomplete beta (e.g. the F(10,10)
// median), and double precision is ample for the tolerances used here.
#define BOOST_MATH_PROMOTE_DOUBLE_POLICY false

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/fisher_f.hpp>
#include <boost/math/distributions/gamma.hpp>

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace shapest {

namespace {

void require_prob(double u, const char* what) {
  if (!(u > 0.0 && u < 1.0)) {
    std::ostringstream msg;
    msg << what << ": probability must lie in (0,1), got " << u;
    throw std::domain_error(msg.str());
  }
}

void require_pos(double x, const char* what, const char* name) {
  if (!(x > 0.0)) {
    std::ostringstream msg;
    msg << what << ": " << name << " must be positive, got " << x;
    throw std::domain_error(msg.str());
  }
}

}  // namespace

ScoreFamily ScoreFamily::student(double nu) {
  require_pos(nu, "ScoreFamily::student", "nu");
  return {ScoreKind::student, nu};
}

ScoreFamily ScoreFamily::power_exponential(double eta) {
  require_pos(eta, "ScoreFamily::power_exponential", "eta");
  return {ScoreKind::power_exponential, eta};
}

RadialFamily RadialFamily::student(double nu) {
  require_pos(nu, "RadialFamily::student", "nu");
  return {RadialKind::student, nu};
}

RadialFamily RadialFamily::power_exponential(double eta) {
  require_pos(eta, "RadialFamily::power_exponential", "eta");
  return {RadialKind::power_exponential, eta};
}

ScoreFamily score_of(const RadialFamily& g1) {
  switch (g1.kind) {
    case RadialKind::gaussian:
      return ScoreFamily::vdw();
    case RadialKind::student:
      return ScoreFamily::student(g1.param);
    case RadialKind::power_exponential:
      return ScoreFamily::power_exponential(g1.param);
  }
  throw std::logic_error("score_of: unknown radial family");
}

double chi2_quantile(double k, double u) {
  require_pos(k, "chi2_quantile", "df");
  require_prob(u, "chi2_quantile");
  return boost::math::quantile(boost::math::chi_squared(k), u);
}

double chi2_cdf(double k, double x) {
  require_pos(k, "chi2_cdf", "df");
  return boost::math::cdf(boost::math::chi_squared(k), x);
}

double f_quantile(double k, double nu, double u) {
  require_pos(k, "f_quantile", "df1");
  require_pos(nu, "f_quantile", "df2");
  require_prob(u, "f_quantile");
  return boost::math::quantile(boost::math::fisher_f(k, nu), u);
}

double f_cdf(double k, double nu, double x) {
  require_pos(k, "f_cdf", "df1");
  require_pos(nu, "f_cdf", "df2");
  return boost::math::cdf(boost::math::fisher_f(k, nu), x);
}

double gamma_quantile(double shape, double u) {
  require_pos(shape, "gamma_quantile", "shape");
  require_prob(u, "gamma_quantile");
  return boost::math::quantile(boost::math::gamma_distribution<double>(shape), u);
}

double gamma_cdf(double shape, double x) {
  require_pos(shape, "gamma_cdf", "shape");
  return boost::math::cdf(boost::math::gamma_distribution<double>(shape), x);
}

double score_K(const ScoreFamily& f1, int k, double u) {
  if (k < 2) throw std::domain_error("score_K: dimension must be >= 2");
  require_prob(u, "score_K");
  const double kd = static_cast<double>(k);
  switch (f1.kind) {
    case ScoreKind::van_der_waerden:
      return chi2_quantile(kd, u);
    case ScoreKind::student: {
      const double nu = f1.param;
      const double q = f_quantile(kd, nu, u);
      if (std::isinf(q)) return kd + nu;
      return kd * (kd + nu) * q / (nu + kd * q);
    }
    case ScoreKind::power_exponential:
      return 2.0 * f1.param * gamma_quantile(kd / (2.0 * f1.param), u);
    case ScoreKind::constant:
      return kd;
  }
  throw std::logic_error("score_K: unknown family");
}

double cross_info(const ScoreFamily& f1, const ScoreFamily& g1, int k,
                  const QuadratureSpec& quad) {
  if (f1.kind == ScoreKind::constant && g1.kind == ScoreKind::constant)
    return static_cast<double>(k) * static_cast<double>(k);
  return integrate01_checked(
      [&](double u) { return score_K(f1, k, u) * score_K(g1, k, u); }, quad);
}

double cross_info(const ScoreFamily& f1, const RadialFamily& g1, int k,
                  const QuadratureSpec& quad) {
  return cross_info(f1, score_of(g1), k, quad);
}

double score_norm(const ScoreFamily& f1, int k) {
  const double kd = static_cast<double>(k);
  switch (f1.kind) {
    case ScoreKind::van_der_waerden:
      return kd * (kd + 2.0);
    case ScoreKind::student: {
      const double nu = f1.param;
      return kd * (kd + 2.0) * (kd + nu) / (kd + nu + 2.0);
    }
    case ScoreKind::power_exponential:
      return kd * (kd + 2.0 * f1.param);
    case ScoreKind::constant:
      return kd * kd;
  }
  throw std::logic_error("score_norm: unknown family");
}

double score_centering_identity_check(const ScoreFamily& f1, int k,
                                      const QuadratureSpec& quad) {
  if (f1.kind == ScoreKind::constant) return static_cast<double>(k);
  return integrate01_checked([&](double u) { return score_K(f1, k, u); },
                             quad);
}

RadialMoments radial_moments(const RadialFamily& g1, int k,
                             const QuadratureSpec& quad) {
  const double kd = static_cast<double>(k);
  RadialMoments m;
  switch (g1.kind) {
    case RadialKind::gaussian:
      // d^2 ~ chi-square(k): moments are exact.
      m.D = kd;
      m.E = kd * (kd + 2.0);
      m.kappa = 0.0;
      return m;
    case RadialKind::student: {
      const double nu = g1.param;
      if (nu <= 4.0) {
        m.D = (nu > 2.0) ? kd * nu / (nu - 2.0)
                         : std::numeric_limits<double>::infinity();
        m.E = std::numeric_limits<double>::infinity();
        m.kappa = kInfiniteKurtosis;
        m.infinite_kurtosis = true;
        return m;
      }
      // d^2 = k F_{k,nu}(u)-quantile
      m.D = integrate01_checked(
          [&](double u) { return kd * f_quantile(kd, nu, u); }, quad);
      m.E = integrate01_checked(
          [&](double u) {
            const double d2 = kd * f_quantile(kd, nu, u);
            return d2 * d2;
          },
          quad);
      break;
    }
    case RadialKind::power_exponential: {
      const double eta = g1.param;
      const double shape = kd / (2.0 * eta);
      // d^{2 eta} ~ Gamma(k/(2 eta), 1), so d^2 is the 1/eta power.
      m.D = integrate01_checked(
          [&](double u) { return std::pow(gamma_quantile(shape, u), 1.0 / eta); },
          quad);
      m.E = integrate01_checked(
          [&](double u) { return std::pow(gamma_quantile(shape, u), 2.0 / eta); },
          quad);
      break;
    }
  }
  m.kappa = kd * m.E / ((kd + 2.0) * m.D * m.D) - 1.0;
  return m;
}

std::string to_string(const ScoreFamily& f1) {
  std::ostringstream s;
  switch (f1.kind) {
    case ScoreKind::van_der_waerden: return "vdw";
    case ScoreKind::constant: return "const";
    case ScoreKind::student: s << "t:" << f1.param; return s.str();
    case ScoreKind::power_exponential: s << "e:" << f1.param; return s.str();
  }
  return "?";
}

std::string to_string(const RadialFamily& g1) {
  std::ostringstream s;
  switch (g1.kind) {
    case RadialKind::gaussian: return "normal";
    case RadialKind::student: s << "t:" << g1.param; return s.str();
    case RadialKind::power_exponential: s << "e:" << g1.param; return s.str();
  }
  return "?";
}

}  // namespace shapest
