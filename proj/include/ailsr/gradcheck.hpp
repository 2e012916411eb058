#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace ailsr {

struct GradCheckParam {
  std::string name;
  std::span<double> values;            // perturbed in place, restored afterwards
  std::span<const double> analytic;    // gradient produced by the implementation
};

struct GradCheckReport {
  double max_rel_err = 0.0;
  std::string worst_param;
  std::size_t worst_index = 0;
  double tolerance = 0.0;
  bool pass = false;
};

// Compares analytic gradients against central finite differences of `loss`
// (evaluated with the current parameter values). Relative error per element
// is |a - fd| / max(|a|, |fd|); elements where both magnitudes fall below
// 1e-10 count as exact.
GradCheckReport grad_check(const std::function<double()>& loss,
                           const std::vector<GradCheckParam>& params, double eps, double tolerance);

}  // namespace ailsr
