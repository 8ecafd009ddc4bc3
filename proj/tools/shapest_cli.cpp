// Command-line interface: sampling, estimation, sphericity testing, ARE
// tables and the Monte Carlo harness.

#include "shapest/efficiency.hpp"
#include "shapest/harness.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace shapest;

ScoreFamily parse_scores(const std::string& s) {
  if (s == "vdw") return ScoreFamily::vdw();
  if (s == "const") return ScoreFamily::constant();
  if (s.rfind("t:", 0) == 0) return ScoreFamily::student(std::stod(s.substr(2)));
  if (s.rfind("e:", 0) == 0)
    return ScoreFamily::power_exponential(std::stod(s.substr(2)));
  throw CLI::ValidationError("scores", "expected vdw, const, t:NU or e:ETA");
}

RadialFamily parse_family(const std::string& s) {
  if (s == "normal" || s == "gaussian") return RadialFamily::gaussian();
  if (s.rfind("t:", 0) == 0) return RadialFamily::student(std::stod(s.substr(2)));
  if (s.rfind("e:", 0) == 0)
    return RadialFamily::power_exponential(std::stod(s.substr(2)));
  throw CLI::ValidationError("family", "expected normal, t:NU or e:ETA");
}

std::vector<double> parse_doubles(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
  return out;
}

Matrix read_csv_matrix(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    rows.push_back(parse_doubles(line));
    if (rows.back().size() != rows.front().size())
      throw std::runtime_error(path + ": ragged CSV");
  }
  if (rows.empty()) throw std::runtime_error(path + ": empty file");
  Matrix x(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  return x;
}

void print_matrix_csv(const Matrix& m, std::ostream& os) {
  os.precision(17);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      os << m(i, j) << (j + 1 < m.cols() ? "," : "\n");
  }
}

int cmd_sample(const std::string& family, int k, int n, std::uint64_t seed,
               const std::string& theta_str, double sigma,
               const std::string& v_str, const std::string& out) {
  RadialModel model = RadialModel::spherical(parse_family(family), k);
  model.sigma = sigma;
  if (!theta_str.empty()) {
    const auto t = parse_doubles(theta_str);
    if (static_cast<int>(t.size()) != k)
      throw std::runtime_error("--theta length must equal k");
    model.theta = Eigen::Map<const Vector>(t.data(), k);
  }
  if (!v_str.empty()) {
    const auto v = parse_doubles(v_str);
    if (static_cast<int>(v.size()) != k * k)
      throw std::runtime_error("--V must list k*k entries row-major");
    model.V = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic,
                                             Eigen::Dynamic, Eigen::RowMajor>>(
        v.data(), k, k);
  }
  const Matrix x = sample(model, n, seed);
  if (out.empty()) {
    print_matrix_csv(x, std::cout);
  } else {
    std::ofstream os(out);
    print_matrix_csv(x, os);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rank-based shape matrix estimation for elliptical data"};
  app.require_subcommand(1);

  // --- sample ---
  auto* s_sample = app.add_subcommand("sample", "draw an elliptical sample as CSV");
  std::string family = "normal", theta_str, v_str, out;
  int k = 2, n = 100;
  std::uint64_t seed = 1;
  double sigma = 1.0;
  s_sample->add_option("--family", family, "normal, t:NU or e:ETA");
  s_sample->add_option("--k", k, "dimension")->check(CLI::Range(2, 20));
  s_sample->add_option("--n", n, "sample size")->required();
  s_sample->add_option("--seed", seed, "RNG seed");
  s_sample->add_option("--theta", theta_str, "location, comma separated");
  s_sample->add_option("--sigma", sigma, "scale");
  s_sample->add_option("--V", v_str, "shape matrix, row-major comma separated");
  s_sample->add_option("--out", out, "output path (default stdout)");

  // --- estimate ---
  auto* s_est = app.add_subcommand("estimate", "estimate the shape matrix");
  std::string method = "tyler", data_path, theta_opt = "auto",
              scores_str = "vdw", prelim = "tyler";
  double tol = 1e-9;
  int max_iter = 500;
  s_est->add_option("--data", data_path, "input CSV")->required();
  s_est->add_option("--method", method, "tyler|gaussian|hr|ronestep");
  s_est->add_option("--theta", theta_opt, "\"v1,v2,...\" or auto (HR median)");
  s_est->add_option("--tol", tol, "convergence tolerance");
  s_est->add_option("--max-iter", max_iter, "iteration cap");
  s_est->add_option("--scores", scores_str, "ronestep: vdw|t:NU|e:ETA|const");
  s_est->add_option("--preliminary", prelim, "ronestep: tyler|gaussian");

  // --- test ---
  auto* s_test = app.add_subcommand("test", "rank-based sphericity test");
  std::string v0_str;
  s_test->add_option("--data", data_path, "input CSV")->required();
  s_test->add_option("--V0", v0_str, "null shape, row-major (default I)");
  s_test->add_option("--scores", scores_str, "vdw|t:NU|e:ETA|const");
  s_test->add_option("--theta", theta_opt, "\"v1,v2,...\" or auto");

  // --- are-table ---
  auto* s_are = app.add_subcommand("are-table", "asymptotic relative efficiencies");
  std::string ks_str = "2,3,4,6,10", are_scores = "vdw,t:0.5,t:3,t:10",
              under_str = "t:0.5,t:3,t:10,normal";
  bool limits = false;
  s_are->add_option("--k", ks_str, "dimensions, comma separated");
  s_are->add_option("--scores", are_scores, "score families");
  s_are->add_option("--under", under_str, "true radial densities");
  s_are->add_flag("--limits", limits, "include the nu -> 0 limit column");

  // --- simulate ---
  auto* s_sim = app.add_subcommand("simulate", "Monte Carlo bias/MSE study");
  std::string config_path, preset, report_out;
  int threads = 0;
  s_sim->add_option("--config", config_path, "JSON config");
  s_sim->add_option("--preset", preset, "benchmark: the standard estimator-comparison grid");
  s_sim->add_option("--out", report_out, "report CSV path (default stdout)");
  s_sim->add_option("--threads", threads, "worker threads (0 = all)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (s_sample->parsed())
      return cmd_sample(family, k, n, seed, theta_str, sigma, v_str, out);

    if (s_est->parsed()) {
      const Matrix x = read_csv_matrix(data_path);
      const int dim = static_cast<int>(x.cols());
      std::cout.precision(12);
      if (method == "hr") {
        const auto r = hr_median(x, tol, max_iter);
        print_matrix_csv(r.V, std::cout);
        std::cout << "# method=hr theta=";
        for (int j = 0; j < dim; ++j)
          std::cout << r.theta(j) << (j + 1 < dim ? "," : "");
        std::cout << " iterations=" << r.iterations
                  << " residual=" << r.residual << "\n";
        return 0;
      }
      if (method == "gaussian") {
        const auto r = gaussian_shape(x);
        print_matrix_csv(r.V, std::cout);
        std::cout << "# method=gaussian iterations=0 residual=0\n";
        return 0;
      }
      Vector theta;
      if (theta_opt == "auto")
        theta = hr_median(x).theta;
      else {
        const auto t = parse_doubles(theta_opt);
        theta = Eigen::Map<const Vector>(t.data(),
                                         static_cast<Eigen::Index>(t.size()));
      }
      if (method == "tyler") {
        const auto r = tyler_shape(x, theta, tol, max_iter);
        print_matrix_csv(r.V, std::cout);
        std::cout << "# method=tyler iterations=" << r.iterations
                  << " residual=" << r.residual << "\n";
        return 0;
      }
      if (method == "ronestep") {
        OneStepConfig cfg;
        cfg.f1 = parse_scores(scores_str);
        cfg.preliminary = prelim == "gaussian"
                              ? OneStepConfig::Preliminary::gaussian
                              : OneStepConfig::Preliminary::tyler;
        if (theta_opt != "auto") cfg.theta = theta;
        cfg.tyler_tol = tol;
        cfg.tyler_max_iter = max_iter;
        const auto r = r_estimate(x, cfg);
        print_matrix_csv(r.V, std::cout);
        std::cout << "# method=ronestep scores=" << scores_str
                  << " preliminary=" << prelim << " beta_star=" << r.beta_star
                  << " alpha_star=" << r.alpha_star
                  << " h_evaluations=" << r.h_evaluations
                  << " fallback=" << (r.fallback ? 1 : 0) << "\n";
        return 0;
      }
      throw std::runtime_error("unknown --method " + method);
    }

    if (s_test->parsed()) {
      const Matrix x = read_csv_matrix(data_path);
      const int dim = static_cast<int>(x.cols());
      Matrix v0 = Matrix::Identity(dim, dim);
      if (!v0_str.empty()) {
        const auto v = parse_doubles(v0_str);
        if (static_cast<int>(v.size()) != dim * dim)
          throw std::runtime_error("--V0 must list k*k entries row-major");
        v0 = Eigen::Map<const Eigen::Matrix<
            double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
            v.data(), dim, dim);
      }
      Vector theta;
      if (theta_opt == "auto")
        theta = hr_median(x).theta;
      else {
        const auto t = parse_doubles(theta_opt);
        theta = Eigen::Map<const Vector>(t.data(),
                                         static_cast<Eigen::Index>(t.size()));
      }
      const auto r = sphericity_stat(x, theta, v0, parse_scores(scores_str));
      std::cout.precision(12);
      std::cout << "Q=" << r.Q << " df=" << r.df << " p=" << r.p_value << "\n";
      return 0;
    }

    if (s_are->parsed()) {
      std::vector<int> ks;
      for (double v : parse_doubles(ks_str)) ks.push_back(static_cast<int>(v));
      std::vector<ScoreFamily> scores;
      std::vector<RadialFamily> under;
      std::stringstream ss(are_scores);
      std::string item;
      while (std::getline(ss, item, ',')) {
        if (item.rfind("t:", 0) == 0 || item == "vdw" || item == "const" ||
            item.rfind("e:", 0) == 0) {
          if (item.rfind("t:", 0) == 0 && item.find(':', 2) != std::string::npos)
            throw std::runtime_error("bad scores entry " + item);
          scores.push_back(parse_scores(item));
        }
      }
      std::stringstream su(under_str);
      while (std::getline(su, item, ',')) under.push_back(parse_family(item));
      std::cout << render_are_csv(are_table(ks, scores, under, limits));
      return 0;
    }

    if (s_sim->parsed()) {
      SimConfig cfg;
      if (preset == "benchmark")
        cfg = benchmark_preset();
      else if (!config_path.empty())
        cfg = read_config(config_path);
      else
        throw std::runtime_error("simulate: need --config or --preset benchmark");
      const SimReport report = run_sim(cfg, threads);
      if (!report_out.empty())
        write_report(report, report_out);
      else if (!cfg.out.empty())
        write_report(report, cfg.out);
      else
        write_report(report, std::cout);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
