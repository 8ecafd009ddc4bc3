// Benchmark: OpenMP Monte Carlo kernel versus the serial reference, on a
// reduced grid. Also checks that the two produce identical reports.

#include "shapest/harness.hpp"

#include <chrono>
#include <cmath>
#include <iostream>

using namespace shapest;

namespace {

double seconds(const std::chrono::steady_clock::time_point& a,
               const std::chrono::steady_clock::time_point& b) {
  return std::chrono::duration<double>(b - a).count();
}

double max_cell_diff(const SimReport& a, const SimReport& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.cells.size(); ++i) {
    d = std::max(d, (a.cells[i].bias - b.cells[i].bias).cwiseAbs().maxCoeff());
    d = std::max(d, (a.cells[i].mse - b.cells[i].mse).cwiseAbs().maxCoeff());
  }
  return d;
}

}  // namespace

int main(int argc, char** argv) {
  int reps = argc > 1 ? std::atoi(argv[1]) : 200;

  SimConfig cfg;
  cfg.k = 2;
  cfg.ns = {100};
  cfg.M = reps;
  cfg.seed = 7;
  cfg.models = {RadialFamily::gaussian(), RadialFamily::student(3.0)};
  EstimatorSpec tyler;
  tyler.method = EstimatorSpec::Method::tyler;
  EstimatorSpec onestep;
  onestep.method = EstimatorSpec::Method::ronestep;
  onestep.scores = ScoreFamily::vdw();
  cfg.estimators = {tyler, onestep};

  const auto t0 = std::chrono::steady_clock::now();
  const SimReport serial = run_sim_reference(cfg);
  const auto t1 = std::chrono::steady_clock::now();
  const SimReport parallel = run_sim(cfg, 0);
  const auto t2 = std::chrono::steady_clock::now();

  const double ts = seconds(t0, t1);
  const double tp = seconds(t1, t2);
  std::cout << "replications per cell: " << cfg.M << "\n"
            << "serial reference:      " << ts << " s\n"
            << "openmp kernel:         " << tp << " s\n"
            << "speedup:               " << ts / tp << "x\n"
            << "max |serial-parallel|: " << max_cell_diff(serial, parallel)
            << "\n";
  return max_cell_diff(serial, parallel) == 0.0 ? 0 : 1;
}
