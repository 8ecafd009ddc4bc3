#pragma once

#include <functional>
#include <stdexcept>

namespace shapest {

// Fixed-level tanh-sinh rule on (0,1). The double-exponential node
// clustering near the endpoints handles score functions that are unbounded
// at u -> 1 (van der Waerden) while converging at double precision for the
// levels used here. `level` doubles the node count per increment.
struct QuadratureSpec {
  int level = 7;           // ~ 6 * 2^level function evaluations
  double edge_clip = 1e-12;  // arguments clipped into [clip, 1 - clip]
};

// Integrates f over (0,1) at the given level.
double integrate01(const std::function<double(double)>& f,
                   const QuadratureSpec& spec = {});

// Integrates at spec.level and spec.level + 1; throws std::runtime_error
// when the two results differ by more than `stability_tol` (quadrature
// non-convergence), otherwise returns the finer result.
double integrate01_checked(const std::function<double(double)>& f,
                           const QuadratureSpec& spec = {},
                           double stability_tol = 1e-8);

}  // namespace shapest
