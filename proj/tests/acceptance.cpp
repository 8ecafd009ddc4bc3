// End-to-end acceptance checks. Each check prints one PASS/FAIL line; the
// exit status is the number of failures. Statistical checks use fixed seeds
// and tolerances chosen from the corresponding Monte Carlo bands.

#include "shapest/efficiency.hpp"
#include "shapest/harness.hpp"
#include "shapest/onestep.hpp"
#include "shapest/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

using namespace shapest;

namespace {

int g_failures = 0;

void report(int idx, const std::string& name, bool pass,
            const std::string& detail = "") {
  std::cout << (pass ? "PASS" : "FAIL") << "  [" << idx << "] " << name;
  if (!detail.empty()) std::cout << "  (" << detail << ")";
  std::cout << std::endl;
  if (!pass) ++g_failures;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// ---------------------------------------------------------------- check 1

// Reference ARE grid: scores {t0.5, t3, t10, vdW} x k {2,3,4,6,10} x
// underlying {t0 limit, t0.5, t3, t10, N}. vs-Tyler values; the vs-Gaussian
// column is infinite except under t10 and N (given separately below).
// The t3/t3/k=4 entry circulates in print as 1.667; recomputation gives
// 1.167, so that cell is reported but not gated.
constexpr double kNaN = -1.0;  // placeholder for the misprinted cell

const double kVsTyler[4][5][5] = {
    // t0.5 scores
    {{0.900, 1.111, 1.246, 1.280, 1.296},
     {0.943, 1.061, 1.145, 1.173, 1.189},
     {0.963, 1.038, 1.098, 1.121, 1.136},
     {0.981, 1.020, 1.054, 1.070, 1.083},
     {0.992, 1.008, 1.024, 1.034, 1.044}},
    // t3 scores
    {{0.700, 0.969, 1.429, 1.651, 1.792},
     {0.800, 0.972, 1.250, 1.400, 1.507},
     {0.857, 0.977, kNaN, 1.278, 1.366},
     {0.917, 0.985, 1.091, 1.162, 1.229},
     {0.962, 0.992, 1.040, 1.078, 1.123}},
    // t10 scores
    {{0.583, 0.829, 1.376, 1.714, 1.961},
     {0.692, 0.861, 1.212, 1.444, 1.633},
     {0.762, 0.887, 1.136, 1.313, 1.468},
     {0.844, 0.921, 1.070, 1.185, 1.304},
     {0.917, 0.955, 1.027, 1.091, 1.174}},
    // vdW scores
    {{0.500, 0.720, 1.280, 1.681, 2.000},
     {0.600, 0.757, 1.130, 1.415, 1.667},
     {0.667, 0.786, 1.063, 1.285, 1.500},
     {0.750, 0.829, 1.005, 1.159, 1.333},
     {0.833, 0.877, 0.973, 1.067, 1.200}}};

// vs-Gaussian reference, columns t10 and N only (infinite elsewhere)
const double kVsGauss[4][5][2] = {
    {{0.853, 0.648}, {0.939, 0.713}, {0.996, 0.757}, {1.070, 0.813},
     {1.149, 0.870}},
    {{1.101, 0.896}, {1.120, 0.904}, {1.136, 0.911}, {1.162, 0.921},
     {1.198, 0.936}},
    {{1.143, 0.980}, {1.156, 0.979}, {1.167, 0.979}, {1.185, 0.978},
     {1.212, 0.978}},
    {{1.120, 1.000}, {1.132, 1.000}, {1.142, 1.000}, {1.159, 1.000},
     {1.186, 1.000}}};

bool check_are_grid(std::string& detail) {
  const std::vector<ScoreFamily> scores = {
      ScoreFamily::student(0.5), ScoreFamily::student(3.0),
      ScoreFamily::student(10.0), ScoreFamily::vdw()};
  const std::vector<RadialFamily> under = {
      RadialFamily::student(0.5), RadialFamily::student(3.0),
      RadialFamily::student(10.0), RadialFamily::gaussian()};
  const int ks[5] = {2, 3, 4, 6, 10};
  const double tol = 0.002;

  bool ok = true;
  double worst = 0.0;
  std::ostringstream note;
  for (int s = 0; s < 4; ++s)
    for (int ki = 0; ki < 5; ++ki) {
      const int k = ks[ki];
      // column 0: the nu -> 0 limit
      {
        const double got = are_limit_nu0(scores[s], k);
        worst = std::max(worst, std::abs(got - kVsTyler[s][ki][0]));
        if (std::abs(got - kVsTyler[s][ki][0]) > tol) ok = false;
      }
      for (int u = 0; u < 4; ++u) {
        const double got = are_vs_tyler(scores[s], under[u], k);
        const double want = kVsTyler[s][ki][u + 1];
        if (want == kNaN) {
          note << "t3/t3/k=4 recomputed " << got
               << " vs printed 1.667 (misprint, not gated); ";
          if (std::abs(got - 1.167) > tol) ok = false;
          continue;
        }
        worst = std::max(worst, std::abs(got - want));
        if (std::abs(got - want) > tol) ok = false;

        const double gotg = are_vs_gaussian(scores[s], under[u], k);
        if (u <= 1) {  // t0.5, t3: no finite fourth radial moment
          if (!std::isinf(gotg)) ok = false;
        } else {
          const double wantg = kVsGauss[s][ki][u - 2];
          worst = std::max(worst, std::abs(gotg - wantg));
          if (std::abs(gotg - wantg) > tol) ok = false;
        }
      }
    }
  note << "max |error| over gated cells " << worst;
  detail = note.str();
  return ok;
}

// ---------------------------------------------------------------- check 2

bool check_closed_forms(std::string& detail) {
  bool ok = true;
  double worst = 0.0;

  for (int k = 2; k <= 10; ++k) {
    const double want = k * (k + 2.0);
    const double got = cross_info(ScoreFamily::vdw(), ScoreFamily::vdw(), k);
    const double rel = std::abs(got - want) / want;
    worst = std::max(worst, rel);
    if (rel > 1e-6) ok = false;
  }

  const std::vector<ScoreFamily> families = {
      ScoreFamily::vdw(), ScoreFamily::student(0.5), ScoreFamily::student(3.0),
      ScoreFamily::student(10.0), ScoreFamily::power_exponential(3.0),
      ScoreFamily::power_exponential(5.0), ScoreFamily::constant()};
  for (const auto& f1 : families)
    for (int k : {2, 3, 4, 6, 10}) {
      const double got = score_centering_identity_check(f1, k);
      if (std::abs(got - k) / k > 1e-6) ok = false;
    }

  double worst_rt = 0.0;
  for (int i = 1; i < 200; ++i) {
    const double u = i / 200.0;
    worst_rt = std::max(worst_rt,
                        std::abs(chi2_cdf(4, chi2_quantile(4, u)) - u));
    worst_rt =
        std::max(worst_rt, std::abs(f_cdf(2, 3, f_quantile(2, 3, u)) - u));
    worst_rt = std::max(
        worst_rt, std::abs(gamma_cdf(0.3, gamma_quantile(0.3, u)) - u));
  }
  if (worst_rt > 1e-10) ok = false;

  std::ostringstream note;
  note << "max rel quadrature error " << worst << ", max round-trip error "
       << worst_rt;
  detail = note.str();
  return ok;
}

// ---------------------------------------------------------------- check 3

bool check_tyler_contract(std::string& detail) {
  bool ok = true;
  double worst_res = 0.0;

  const RadialFamily laws[3] = {RadialFamily::gaussian(),
                                RadialFamily::student(3.0),
                                RadialFamily::student(1.0)};
  for (int i = 0; i < 1000; ++i) {
    const int k = 2 + i % 3;
    const auto model = RadialModel::spherical(laws[i % 3], k);
    const Matrix x = sample(model, 100, 1000, static_cast<std::uint64_t>(i));
    const auto rep = tyler_shape(x, Vector::Zero(k));
    // recompute the sign-equation residual independently of the report
    const auto rs = ranks_signs(x, Vector::Zero(k), rep.V);
    const double res =
        (static_cast<double>(k) / 100.0 * (rs.U.transpose() * rs.U) -
         Matrix::Identity(k, k))
            .norm();
    worst_res = std::max(worst_res, res);
    if (res > 1e-9) ok = false;
  }

  // affine equivariance on a fixed dataset; both fits are pushed well
  // below the default residual so the 1e-8 comparison is about the
  // estimator, not about where the iterations stopped
  const int k = 3;
  const double eq_tol = 1e-12;
  const Matrix x = sample(
      RadialModel::spherical(RadialFamily::student(3.0), k), 200, 2000, 0);
  const Matrix v0 = tyler_shape(x, Vector::Zero(k), eq_tol, 2000).V;
  double worst_eq = 0.0;
  for (int t = 0; t < 100; ++t) {
    ObsRng rng(mix_key(3000, 0, static_cast<std::uint64_t>(t)));
    Matrix A(k, k);
    for (int r = 0; r < k; ++r)
      for (int c = 0; c < k; ++c) A(r, c) = rng.normal();
    if (std::abs(A.determinant()) < 1e-3) continue;
    const Matrix va =
        tyler_shape(x * A.transpose(), Vector::Zero(k), eq_tol, 2000).V;
    const Matrix expected = normalize_shape(A * v0 * A.transpose());
    const double err = (va - expected).cwiseAbs().maxCoeff();
    worst_eq = std::max(worst_eq, err);
    if (err > 1e-8) ok = false;
  }

  std::ostringstream note;
  note << "max residual " << worst_res << ", max equivariance error "
       << worst_eq;
  detail = note.str();
  return ok;
}

// ---------------------------------------------------------------- check 4

bool check_onestep_identities(std::string& detail) {
  bool ok = true;
  double worst = 0.0;

  const ScoreFamily scores[3] = {ScoreFamily::vdw(), ScoreFamily::student(3.0),
                                 ScoreFamily::student(0.5)};
  const RadialFamily laws[2] = {RadialFamily::gaussian(),
                                RadialFamily::student(3.0)};
  for (int i = 0; i < 100; ++i) {
    const int k = 2 + i % 2;
    const Matrix x = sample(RadialModel::spherical(laws[i % 2], k), 150, 4000,
                            static_cast<std::uint64_t>(i));
    OneStepConfig cfg;
    cfg.f1 = scores[i % 3];
    cfg.theta = Vector::Zero(k);
    const auto res = r_estimate(x, cfg);
    if (res.fallback) {
      ok = false;
      continue;
    }

    // h~(0) is a squared norm
    if (h_tilde(x, *cfg.theta, res.V_pre, cfg.f1, 0.0) < 0.0) ok = false;

    // alpha* = 1/beta* exactly
    if (res.beta_star > 0.0 &&
        std::abs(res.alpha_star * res.beta_star - 1.0) > 1e-12)
      ok = false;

    // the two algebraically equivalent update forms agree to 1e-12
    const double c = res.beta_star * k * (k + 2.0);
    const Matrix w = rank_weighted_scatter(x, *cfg.theta, res.V_pre, cfg.f1);
    const Matrix alt = (1.0 - c * w(0, 0)) * res.V_pre + c * w;
    const double err = (res.V - alt).cwiseAbs().maxCoeff();
    worst = std::max(worst, err);
    if (err > 1e-12) ok = false;
  }

  // constant scores reproduce the preliminary estimate bit for bit
  for (int i = 0; i < 10; ++i) {
    const Matrix x =
        sample(RadialModel::spherical(RadialFamily::student(3.0), 2), 120,
               4100, static_cast<std::uint64_t>(i));
    OneStepConfig cfg;
    cfg.f1 = ScoreFamily::constant();
    cfg.theta = Vector::Zero(2);
    const auto res = r_estimate(x, cfg);
    if (res.beta_star != 0.0) ok = false;
    if ((res.V - res.V_pre).cwiseAbs().maxCoeff() != 0.0) ok = false;
  }

  std::ostringstream note;
  note << "max identity error " << worst;
  detail = note.str();
  return ok;
}

// ---------------------------------------------------------------- check 5

bool check_cross_info_consistency(std::string& detail) {
  const int k = 2, n = 5000, seeds = 200;
  const ScoreFamily f1s[2] = {ScoreFamily::vdw(), ScoreFamily::student(3.0)};
  const RadialFamily g1s[2] = {RadialFamily::gaussian(),
                               RadialFamily::student(3.0)};
  bool ok = true;
  std::ostringstream note;

  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      const double target = cross_info(f1s[a], g1s[b], k);
      std::vector<double> alphas;
      alphas.reserve(seeds);
      int fallbacks = 0;
      for (int s = 0; s < seeds; ++s) {
        const Matrix x =
            sample(RadialModel::spherical(g1s[b], k), n,
                   5000 + 17 * a + 31 * b, static_cast<std::uint64_t>(s));
        OneStepConfig cfg;
        cfg.f1 = f1s[a];
        cfg.theta = Vector::Zero(k);
        const auto res = r_estimate(x, cfg);
        if (res.fallback || res.beta_star <= 0.0) {
          ++fallbacks;
          continue;
        }
        alphas.push_back(res.alpha_star);
      }
      if (fallbacks > seeds / 20) ok = false;
      const double med = alphas.empty() ? 0.0 : median(alphas);
      const double rel = std::abs(med - target) / target;
      note << to_string(f1s[a]) << "/" << to_string(g1s[b]) << ": median "
           << med << " vs " << target << " (rel " << rel << "); ";
      if (rel > 0.10) ok = false;
    }
  detail = note.str();
  return ok;
}

// ---------------------------------------------------------------- check 6

struct McTarget {
  std::size_t estimator;  // index into cfg.estimators
  std::size_t model;      // index into cfg.models
  double mse_offdiag;
  double mse_diag;
};

bool check_mc_reference_cells(std::string& detail) {
  SimConfig cfg;
  cfg.k = 2;
  cfg.ns = {250};
  cfg.M = 1000;
  cfg.seed = 20090531;
  cfg.models = {RadialFamily::gaussian(), RadialFamily::power_exponential(5.0)};

  EstimatorSpec tyler;
  tyler.method = EstimatorSpec::Method::tyler;
  EstimatorSpec gauss;
  gauss.method = EstimatorSpec::Method::gaussian;
  EstimatorSpec vdw;
  vdw.method = EstimatorSpec::Method::ronestep;
  vdw.scores = ScoreFamily::vdw();
  vdw.preliminary = OneStepConfig::Preliminary::tyler;
  cfg.estimators = {tyler, gauss, vdw};

  const auto rep = run_sim(cfg, 0);

  // reference mean-square errors of (V12, V22 - 1) at n = 250, M = 1000
  const std::vector<McTarget> targets = {
      {0, 0, 0.0075, 0.0369},  // Tyler under the normal
      {1, 0, 0.0038, 0.0175},  // Gaussian MLE under the normal
      {2, 0, 0.0039, 0.0176},  // vdW one-step under the normal
      {2, 1, 0.0019, 0.0073},  // vdW one-step under e5
  };

  // fourth moments for the Monte Carlo bands, from a serial re-run of the
  // same replication streams
  bool ok = true;
  std::ostringstream note;
  for (const auto& t : targets) {
    const CellStats* cell = nullptr;
    for (const auto& c : rep.cells)
      if (c.estimator_index == t.estimator && c.model_index == t.model)
        cell = &c;
    if (!cell) return false;

    // recompute per-replication squares to get the SE of the MSE
    Vector sum2 = Vector::Zero(2), sum4 = Vector::Zero(2);
    int okreps = 0;
    for (int r = 0; r < cfg.M; ++r) {
      const auto model = RadialModel::spherical(cfg.models[t.model], cfg.k);
      const std::uint64_t key =
          mix_key(cfg.seed, t.model * 1000003ULL + 250ULL,
                  static_cast<std::uint64_t>(r));
      const Matrix x = sample(model, 250, key);
      Matrix v;
      try {
        switch (cfg.estimators[t.estimator].method) {
          case EstimatorSpec::Method::tyler:
            v = tyler_shape(x, Vector::Zero(2)).V;
            break;
          case EstimatorSpec::Method::gaussian:
            v = gaussian_shape(x).V;
            break;
          default: {
            OneStepConfig oc;
            oc.f1 = cfg.estimators[t.estimator].scores;
            oc.preliminary = cfg.estimators[t.estimator].preliminary;
            oc.theta = Vector::Zero(2);
            v = r_estimate(x, oc).V;
          }
        }
      } catch (const std::exception&) {
        continue;
      }
      const Vector z{{v(0, 1), v(1, 1) - 1.0}};
      sum2 += z.cwiseProduct(z);
      sum4 += z.cwiseProduct(z).cwiseProduct(z.cwiseProduct(z));
      ++okreps;
    }
    const Vector mse = sum2 / okreps;
    // cross-check against the harness cell
    if ((mse - cell->mse).cwiseAbs().maxCoeff() > 1e-12) ok = false;

    const double want[2] = {t.mse_offdiag, t.mse_diag};
    for (int j = 0; j < 2; ++j) {
      const double var = sum4(j) / okreps - mse(j) * mse(j);
      const double se = std::sqrt(std::max(var, 0.0) / okreps);
      const double band = std::max(3.0 * se, 0.15 * want[j]);
      note << "est" << t.estimator << "/model" << t.model << "[" << j
           << "]: " << mse(j) << " vs " << want[j] << " +/- " << band << "; ";
      if (std::abs(mse(j) - want[j]) > band) ok = false;
    }
  }
  detail = note.str();
  return ok;
}

// ---------------------------------------------------------------- check 7

bool check_sphericity_size(std::string& detail) {
  const int k = 2, n = 200, M = 2000;
  const double crit = chi2_quantile(k * (k + 1) / 2.0 - 1.0, 0.95);
  int rejections = 0;
  for (int r = 0; r < M; ++r) {
    const Matrix x = sample(RadialModel::spherical(RadialFamily::gaussian(), k),
                            n, 7000, static_cast<std::uint64_t>(r));
    const auto res = sphericity_stat(x, Vector::Zero(k),
                                     Matrix::Identity(k, k), ScoreFamily::vdw());
    if (res.Q > crit) ++rejections;
  }
  const double rate = static_cast<double>(rejections) / M;
  std::ostringstream note;
  note << "empirical size " << rate << " (nominal 0.05)";
  detail = note.str();
  return rate >= 0.035 && rate <= 0.065;
}

// ---------------------------------------------------------------- check 8

// two-sample Kolmogorov-Smirnov p-value (asymptotic)
double ks_two_sample_p(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const std::size_t m = a.size(), n = b.size();
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < m && j < n) {
    if (a[i] <= b[j])
      ++i;
    else
      ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / m -
                             static_cast<double>(j) / n));
  }
  const double ne = std::sqrt(static_cast<double>(m) * n / (m + n));
  const double lambda = (ne + 0.12 + 0.11 / ne) * d;
  double p = 0.0;
  for (int t = 1; t <= 100; ++t)
    p += 2.0 * ((t % 2) ? 1.0 : -1.0) * std::exp(-2.0 * t * t * lambda * lambda);
  return std::min(std::max(p, 0.0), 1.0);
}

bool check_distribution_freeness(std::string& detail) {
  const int k = 2, n = 200, M = 2000;
  std::vector<double> q_normal, q_student;
  q_normal.reserve(M);
  q_student.reserve(M);
  for (int r = 0; r < M; ++r) {
    const Matrix xn = sample(
        RadialModel::spherical(RadialFamily::gaussian(), k), n, 8000,
        static_cast<std::uint64_t>(r));
    const Matrix xt = sample(
        RadialModel::spherical(RadialFamily::student(3.0), k), n, 8500,
        static_cast<std::uint64_t>(r));
    q_normal.push_back(sphericity_stat(xn, Vector::Zero(k),
                                       Matrix::Identity(k, k),
                                       ScoreFamily::vdw())
                           .Q);
    q_student.push_back(sphericity_stat(xt, Vector::Zero(k),
                                        Matrix::Identity(k, k),
                                        ScoreFamily::vdw())
                            .Q);
  }
  const double p = ks_two_sample_p(q_normal, q_student);
  std::ostringstream note;
  note << "two-sample KS p = " << p;
  detail = note.str();
  return p > 0.001;
}

}  // namespace

int main() {
  std::cout.precision(6);
  std::string detail;

  bool ok = check_are_grid(detail);
  report(1, "ARE grid matches the reference values to 0.002", ok, detail);

  ok = check_closed_forms(detail);
  report(2, "closed-form quadrature and quantile oracles", ok, detail);

  ok = check_tyler_contract(detail);
  report(3, "Tyler residual and affine equivariance contracts", ok, detail);

  ok = check_onestep_identities(detail);
  report(4, "one-step algebraic identities", ok, detail);

  ok = check_cross_info_consistency(detail);
  report(5, "1/beta* consistently estimates the cross information", ok,
         detail);

  ok = check_mc_reference_cells(detail);
  report(6, "Monte Carlo MSE matches the reference cells", ok, detail);

  ok = check_sphericity_size(detail);
  report(7, "sphericity test holds its 5% size", ok, detail);

  ok = check_distribution_freeness(detail);
  report(8, "sphericity statistic is distribution-free across radial laws",
         ok, detail);

  std::cout << (g_failures == 0 ? "ALL CHECKS PASSED"
                                : std::to_string(g_failures) + " CHECK(S) FAILED")
            << std::endl;
  return g_failures;
}
