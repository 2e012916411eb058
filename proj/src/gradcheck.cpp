#include "ailsr/gradcheck.hpp"

#include <algorithm>
#include <cmath>

namespace ailsr {

GradCheckReport grad_check(const std::function<double()>& loss,
                           const std::vector<GradCheckParam>& params, double eps,
                           double tolerance) {
  GradCheckReport report;
  report.tolerance = tolerance;
  for (const GradCheckParam& p : params) {
    for (std::size_t k = 0; k < p.values.size(); ++k) {
      const double saved = p.values[k];
      p.values[k] = saved + eps;
      const double up = loss();
      p.values[k] = saved - eps;
      const double down = loss();
      p.values[k] = saved;
      const double fd = (up - down) / (2.0 * eps);
      const double a = p.analytic[k];
      const double denom = std::max(std::abs(a), std::abs(fd));
      const double rel = denom < 1e-10 ? 0.0 : std::abs(a - fd) / denom;
      if (rel > report.max_rel_err) {
        report.max_rel_err = rel;
        report.worst_param = p.name;
        report.worst_index = k;
      }
    }
  }
  report.pass = report.max_rel_err <= tolerance;
  return report;
}

}  // namespace ailsr
