#pragma once

#include "shapest/quadrature.hpp"

#include <limits>
#include <string>

namespace shapest {

// Radial score family generating K_{f1}. The dimension k is supplied per
// call, not stored in the family.
enum class ScoreKind { van_der_waerden, student, power_exponential, constant };

struct ScoreFamily {
  ScoreKind kind = ScoreKind::van_der_waerden;
  double param = 0.0;  // nu for student, eta for power_exponential

  static ScoreFamily vdw() { return {ScoreKind::van_der_waerden, 0.0}; }
  static ScoreFamily student(double nu);
  static ScoreFamily power_exponential(double eta);
  static ScoreFamily constant() { return {ScoreKind::constant, 0.0}; }
};

// Elliptical radial law used both for sampling and for the g1 side of the
// cross-information integrals.
enum class RadialKind { gaussian, student, power_exponential };

struct RadialFamily {
  RadialKind kind = RadialKind::gaussian;
  double param = 0.0;

  static RadialFamily gaussian() { return {RadialKind::gaussian, 0.0}; }
  static RadialFamily student(double nu);
  static RadialFamily power_exponential(double eta);
};

// The score function optimal at the given radial density: vdW for the
// Gaussian, K_nu for Student, the closed-form power-exponential score
// otherwise.
ScoreFamily score_of(const RadialFamily& g1);

// Quantile functions (inverse CDFs). All require u in (0,1) and positive
// parameters, and throw std::domain_error otherwise.
double chi2_quantile(double k, double u);
double chi2_cdf(double k, double x);
double f_quantile(double k, double nu, double u);
double f_cdf(double k, double nu, double x);
double gamma_quantile(double shape, double u);
double gamma_cdf(double shape, double x);

// Score function K_{f1}(u) for dimension k:
//   van der Waerden  K(u) = Psi_k^{-1}(u)              (chi-square quantile)
//   student(nu)      K(u) = k(k+nu) q / (nu + k q),    q = G_{k,nu}^{-1}(u)
//   power-exp(eta)   K(u) = 2 eta * GammaInv(k/(2 eta), u)
//   constant         K(u) = k
double score_K(const ScoreFamily& f1, int k, double u);

// Cross-information J_k(f1, g1) = int_0^1 K_{f1}(u) K_{g1}(u) du.
double cross_info(const ScoreFamily& f1, const ScoreFamily& g1, int k,
                  const QuadratureSpec& quad = {});
double cross_info(const ScoreFamily& f1, const RadialFamily& g1, int k,
                  const QuadratureSpec& quad = {});

// J_k(f1) = J_k(f1, f1), in closed form where one exists:
//   vdW: k(k+2); student: k(k+2)(k+nu)/(k+nu+2); constant: k^2;
//   power-exponential: k(k+2 eta).
double score_norm(const ScoreFamily& f1, int k);

// int_0^1 K_{f1}(u) du, which equals k for every admissible family.
double score_centering_identity_check(const ScoreFamily& f1, int k,
                                      const QuadratureSpec& quad = {});

// Radial moments D_k, E_k and the kurtosis coefficient
// kappa_k = k E_k / ((k+2) D_k^2) - 1 of the radial law g1. Student with
// nu <= 4 has no finite fourth moment; kappa is then the infinity marker
// (not an error) so ARE tables can print "inf".
struct RadialMoments {
  double D = 0.0;
  double E = 0.0;
  double kappa = 0.0;
  bool infinite_kurtosis = false;
};

RadialMoments radial_moments(const RadialFamily& g1, int k,
                             const QuadratureSpec& quad = {});

constexpr double kInfiniteKurtosis = std::numeric_limits<double>::infinity();

std::string to_string(const ScoreFamily& f1);
std::string to_string(const RadialFamily& g1);

}  // namespace shapest
