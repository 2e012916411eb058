#include "ailsr/tensor.hpp"

#include <cmath>

namespace ailsr {

std::string Tensor::shape_str() const {
  return std::to_string(n) + "x" + std::to_string(c) + "x" + std::to_string(h) + "x" +
         std::to_string(w);
}

void ensure_finite(const Tensor& t, const std::string& what) {
  for (double x : t.v) {
    if (!std::isfinite(x)) throw Error(what + ": non-finite value in tensor " + t.shape_str());
  }
}

void ensure_finite(const std::vector<double>& v, const std::string& what) {
  for (double x : v) {
    if (!std::isfinite(x)) throw Error(what + ": non-finite value");
  }
}

}  // namespace ailsr
