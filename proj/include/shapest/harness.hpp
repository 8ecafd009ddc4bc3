#pragma once

#include "shapest/onestep.hpp"
#include "shapest/sampler.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace shapest {

// One estimator entry of a simulation run.
struct EstimatorSpec {
  enum class Method { tyler, gaussian, ronestep };
  Method method = Method::tyler;
  ScoreFamily scores;  // ronestep only
  OneStepConfig::Preliminary preliminary = OneStepConfig::Preliminary::tyler;
  bool known_location = true;  // theta = 0 when true, HR median otherwise

  std::string method_name() const;
  std::string scores_name() const;
  std::string preliminary_name() const;
};

struct SimConfig {
  int k = 2;
  std::vector<int> ns;
  int M = 1000;
  std::uint64_t seed = 20090531;
  std::vector<RadialFamily> models;  // V = I_k, theta = 0, sigma = 1
  std::vector<EstimatorSpec> estimators;
  std::string out;  // optional output path
};

// Per-(estimator, model, n) aggregate over the replications. For k = 2 the
// free components are (V12, V22 - 1); for k > 2 one entry per free vech
// component in vech order (the leading V11 component is pinned and skipped).
struct CellStats {
  std::size_t estimator_index = 0;
  std::size_t model_index = 0;
  int n = 0;
  int M = 0;
  int failures = 0;
  Vector bias;  // mean of the free components
  Vector mse;   // mean of their squares
};

struct SimReport {
  SimConfig config;
  std::vector<CellStats> cells;
};

// Runs the full grid. Replications are independent; each uses the data
// substream mix_key(seed, model_index * 1000003 + n, rep) so every
// estimator sees the same samples and adding estimators never changes the
// data. `threads` > 1 enables the OpenMP kernel; results are bit-identical
// to the serial reference regardless of thread count (per-rep results are
// stored by index and reduced in index order).
SimReport run_sim(const SimConfig& cfg, int threads = 1);

// Plain sequential loop, kept as the reference implementation for testing
// and benchmarking the parallel kernel against.
SimReport run_sim_reference(const SimConfig& cfg);

// CSV report. k = 2 header:
// estimator,scores,preliminary,family,param,k,n,M,failures,
// bias_offdiag,bias_diag,mse_offdiag,mse_diag
// k > 2 emits one row per free component with a `component` column.
void write_report(const SimReport& report, std::ostream& os);
void write_report(const SimReport& report, const std::string& path);

// JSON config mirroring SimConfig fields.
SimConfig read_config(const std::string& path);
SimConfig parse_config(const std::string& json_text);
std::string config_to_json(const SimConfig& cfg);

// Standard benchmark grid: models t0.5, t3, t10, normal, e3, e5;
// n in {50, 250}; M = 1000; Tyler, Gaussian and the one-step estimators
// with t0.5/t3/t10/vdW scores under both preliminaries; theta known = 0.
SimConfig benchmark_preset();

}  // namespace shapest
