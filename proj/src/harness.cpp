#include "shapest/harness.hpp"

#include <nlohmann/json.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <fstream>
#include <sstream>

namespace shapest {

namespace {

using nlohmann::json;

Matrix run_one_estimator(const Matrix& x, const EstimatorSpec& spec, int k) {
  const Vector zero = Vector::Zero(k);
  switch (spec.method) {
    case EstimatorSpec::Method::tyler:
      if (spec.known_location) return tyler_shape(x, zero).V;
      return tyler_shape(x, hr_median(x).theta).V;
    case EstimatorSpec::Method::gaussian:
      return gaussian_shape(x).V;
    case EstimatorSpec::Method::ronestep: {
      OneStepConfig cfg;
      cfg.f1 = spec.scores;
      cfg.preliminary = spec.preliminary;
      if (spec.known_location) cfg.theta = zero;
      return r_estimate(x, cfg).V;
    }
  }
  throw std::logic_error("run_one_estimator: unknown method");
}

// free vech components (everything but the pinned leading entry) of V - I
Vector free_components(const Matrix& v) {
  const Vector full = vech(v - Matrix::Identity(v.rows(), v.cols()));
  return full.tail(full.size() - 1);
}

struct RepResult {
  std::vector<Vector> per_estimator;  // empty vector marks a failure
};

RepResult run_replication(const SimConfig& cfg, std::size_t model_idx, int n,
                          int rep) {
  const RadialModel model =
      RadialModel::spherical(cfg.models[model_idx], cfg.k);
  const std::uint64_t data_key =
      mix_key(cfg.seed, model_idx * 1000003ULL + static_cast<std::uint64_t>(n),
              static_cast<std::uint64_t>(rep));
  const Matrix x = sample(model, n, data_key);

  RepResult out;
  out.per_estimator.reserve(cfg.estimators.size());
  for (const auto& spec : cfg.estimators) {
    try {
      out.per_estimator.push_back(free_components(run_one_estimator(x, spec, cfg.k)));
    } catch (const std::exception&) {
      out.per_estimator.emplace_back();  // failure: exclude and count
    }
  }
  return out;
}

SimReport aggregate(const SimConfig& cfg,
                    const std::vector<std::vector<RepResult>>& results) {
  SimReport report;
  report.config = cfg;
  const int ncomp = cfg.k * (cfg.k + 1) / 2 - 1;
  std::size_t cell_idx = 0;
  for (std::size_t mi = 0; mi < cfg.models.size(); ++mi)
    for (int n : cfg.ns) {
      const auto& reps = results[cell_idx++];
      for (std::size_t ei = 0; ei < cfg.estimators.size(); ++ei) {
        CellStats cell;
        cell.estimator_index = ei;
        cell.model_index = mi;
        cell.n = n;
        cell.M = cfg.M;
        cell.bias = Vector::Zero(ncomp);
        cell.mse = Vector::Zero(ncomp);
        int ok = 0;
        for (const auto& rep : reps) {  // fixed index order: deterministic
          const Vector& c = rep.per_estimator[ei];
          if (c.size() == 0) {
            ++cell.failures;
            continue;
          }
          cell.bias += c;
          cell.mse += c.cwiseProduct(c);
          ++ok;
        }
        if (ok > 0) {
          cell.bias /= static_cast<double>(ok);
          cell.mse /= static_cast<double>(ok);
        }
        report.cells.push_back(std::move(cell));
      }
    }
  return report;
}

void validate(const SimConfig& cfg) {
  if (cfg.k < 2) throw std::invalid_argument("run_sim: k must be >= 2");
  if (cfg.M < 1) throw std::invalid_argument("run_sim: M must be >= 1");
  if (cfg.ns.empty() || cfg.models.empty() || cfg.estimators.empty())
    throw std::invalid_argument("run_sim: ns, models and estimators must be non-empty");
}

}  // namespace

SimReport run_sim(const SimConfig& cfg, int threads) {
  validate(cfg);
  const std::size_t n_cells = cfg.models.size() * cfg.ns.size();
  std::vector<std::vector<RepResult>> results(n_cells);

  std::size_t cell_idx = 0;
  for (std::size_t mi = 0; mi < cfg.models.size(); ++mi)
    for (int n : cfg.ns) {
      auto& reps = results[cell_idx++];
      reps.resize(cfg.M);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) \
    num_threads(threads > 0 ? threads : omp_get_max_threads())
#endif
      for (int rep = 0; rep < cfg.M; ++rep)
        reps[rep] = run_replication(cfg, mi, n, rep);
    }
  return aggregate(cfg, results);
}

SimReport run_sim_reference(const SimConfig& cfg) {
  validate(cfg);
  const std::size_t n_cells = cfg.models.size() * cfg.ns.size();
  std::vector<std::vector<RepResult>> results(n_cells);

  std::size_t cell_idx = 0;
  for (std::size_t mi = 0; mi < cfg.models.size(); ++mi)
    for (int n : cfg.ns) {
      auto& reps = results[cell_idx++];
      reps.reserve(cfg.M);
      for (int rep = 0; rep < cfg.M; ++rep)
        reps.push_back(run_replication(cfg, mi, n, rep));
    }
  return aggregate(cfg, results);
}

std::string EstimatorSpec::method_name() const {
  switch (method) {
    case Method::tyler: return "tyler";
    case Method::gaussian: return "gaussian";
    case Method::ronestep: return "ronestep";
  }
  return "?";
}

std::string EstimatorSpec::scores_name() const {
  return method == Method::ronestep ? to_string(scores) : std::string("-");
}

std::string EstimatorSpec::preliminary_name() const {
  if (method != Method::ronestep) return "-";
  return preliminary == OneStepConfig::Preliminary::tyler ? "tyler"
                                                          : "gaussian";
}

void write_report(const SimReport& report, std::ostream& os) {
  const auto& cfg = report.config;
  os.precision(10);
  if (cfg.k == 2) {
    os << "estimator,scores,preliminary,family,param,k,n,M,failures,"
          "bias_offdiag,bias_diag,mse_offdiag,mse_diag\n";
  } else {
    os << "estimator,scores,preliminary,family,param,k,n,M,failures,"
          "component,bias,mse\n";
  }
  for (const auto& cell : report.cells) {
    const auto& est = cfg.estimators[cell.estimator_index];
    const auto& fam = cfg.models[cell.model_index];
    std::ostringstream prefix;
    prefix << est.method_name() << ',' << est.scores_name() << ','
           << est.preliminary_name() << ','
           << (fam.kind == RadialKind::gaussian
                   ? "normal"
                   : (fam.kind == RadialKind::student ? "t" : "e"))
           << ',' << fam.param << ',' << cfg.k << ',' << cell.n << ','
           << cell.M << ',' << cell.failures;
    if (cfg.k == 2) {
      os << prefix.str() << ',' << cell.bias(0) << ',' << cell.bias(1) << ','
         << cell.mse(0) << ',' << cell.mse(1) << '\n';
    } else {
      for (Eigen::Index c = 0; c < cell.bias.size(); ++c)
        os << prefix.str() << ',' << c + 1 << ',' << cell.bias(c) << ','
           << cell.mse(c) << '\n';
    }
  }
}

void write_report(const SimReport& report, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("write_report: cannot open " + path);
  write_report(report, os);
}

namespace {

RadialFamily family_from_json(const json& j) {
  const std::string f = j.at("family").get<std::string>();
  if (f == "normal" || f == "gaussian") return RadialFamily::gaussian();
  if (f == "t" || f == "student")
    return RadialFamily::student(j.at("param").get<double>());
  if (f == "e" || f == "power_exponential")
    return RadialFamily::power_exponential(j.at("param").get<double>());
  throw std::invalid_argument("config: unknown family \"" + f + "\"");
}

ScoreFamily scores_from_string(const std::string& s) {
  if (s == "vdw") return ScoreFamily::vdw();
  if (s == "const") return ScoreFamily::constant();
  if (s.rfind("t:", 0) == 0) return ScoreFamily::student(std::stod(s.substr(2)));
  if (s.rfind("e:", 0) == 0)
    return ScoreFamily::power_exponential(std::stod(s.substr(2)));
  throw std::invalid_argument("config: unknown scores \"" + s + "\"");
}

EstimatorSpec estimator_from_json(const json& j) {
  EstimatorSpec spec;
  const std::string m = j.at("method").get<std::string>();
  if (m == "tyler") {
    spec.method = EstimatorSpec::Method::tyler;
  } else if (m == "gaussian") {
    spec.method = EstimatorSpec::Method::gaussian;
  } else if (m == "ronestep") {
    spec.method = EstimatorSpec::Method::ronestep;
    spec.scores = scores_from_string(j.at("scores").get<std::string>());
    if (j.contains("preliminary"))
      spec.preliminary = j.at("preliminary").get<std::string>() == "gaussian"
                             ? OneStepConfig::Preliminary::gaussian
                             : OneStepConfig::Preliminary::tyler;
  } else {
    throw std::invalid_argument("config: unknown method \"" + m + "\"");
  }
  if (j.contains("location"))
    spec.known_location = j.at("location").get<std::string>() != "hr";
  return spec;
}

}  // namespace

SimConfig parse_config(const std::string& json_text) {
  json j = json::parse(json_text);  // parse_error carries position info
  SimConfig cfg;
  cfg.k = j.at("k").get<int>();
  cfg.ns = j.at("n").get<std::vector<int>>();
  cfg.M = j.at("M").get<int>();
  if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
  for (const auto& m : j.at("models")) cfg.models.push_back(family_from_json(m));
  for (const auto& e : j.at("estimators"))
    cfg.estimators.push_back(estimator_from_json(e));
  if (j.contains("out")) cfg.out = j.at("out").get<std::string>();
  return cfg;
}

SimConfig read_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("read_config: cannot open " + path);
  std::ostringstream buf;
  buf << is.rdbuf();
  return parse_config(buf.str());
}

std::string config_to_json(const SimConfig& cfg) {
  json j;
  j["k"] = cfg.k;
  j["n"] = cfg.ns;
  j["M"] = cfg.M;
  j["seed"] = cfg.seed;
  j["models"] = json::array();
  for (const auto& m : cfg.models) {
    json jm;
    switch (m.kind) {
      case RadialKind::gaussian: jm["family"] = "normal"; break;
      case RadialKind::student: jm["family"] = "t"; jm["param"] = m.param; break;
      case RadialKind::power_exponential:
        jm["family"] = "e";
        jm["param"] = m.param;
        break;
    }
    j["models"].push_back(jm);
  }
  j["estimators"] = json::array();
  for (const auto& e : cfg.estimators) {
    json je;
    je["method"] = e.method_name();
    if (e.method == EstimatorSpec::Method::ronestep) {
      je["scores"] = to_string(e.scores);
      je["preliminary"] = e.preliminary_name();
    }
    je["location"] = e.known_location ? "known" : "hr";
    j["estimators"].push_back(je);
  }
  if (!cfg.out.empty()) j["out"] = cfg.out;
  return j.dump(2);
}

SimConfig benchmark_preset() {
  SimConfig cfg;
  cfg.k = 2;
  cfg.ns = {50, 250};
  cfg.M = 1000;
  cfg.models = {RadialFamily::student(0.5), RadialFamily::student(3.0),
                RadialFamily::student(10.0), RadialFamily::gaussian(),
                RadialFamily::power_exponential(3.0),
                RadialFamily::power_exponential(5.0)};

  EstimatorSpec tyler;
  tyler.method = EstimatorSpec::Method::tyler;
  EstimatorSpec gauss;
  gauss.method = EstimatorSpec::Method::gaussian;
  cfg.estimators = {tyler, gauss};
  const std::vector<ScoreFamily> scores = {
      ScoreFamily::student(0.5), ScoreFamily::student(3.0),
      ScoreFamily::student(10.0), ScoreFamily::vdw()};
  for (const auto& f1 : scores)
    for (auto prelim : {OneStepConfig::Preliminary::tyler,
                        OneStepConfig::Preliminary::gaussian}) {
      EstimatorSpec spec;
      spec.method = EstimatorSpec::Method::ronestep;
      spec.scores = f1;
      spec.preliminary = prelim;
      cfg.estimators.push_back(spec);
    }
  return cfg;
}

}  // namespace shapest
