#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "ailsr/errors.hpp"

namespace ailsr {

// Dense 4-D array in row-major (batch, channel, height, width) order,
// 64-bit floats throughout.
struct Tensor {
  int n = 0, c = 0, h = 0, w = 0;
  std::vector<double> v;

  Tensor() = default;
  Tensor(int n_, int c_, int h_, int w_)
      : n(n_), c(c_), h(h_), w(w_), v(static_cast<std::size_t>(n_) * c_ * h_ * w_, 0.0) {
    if (n_ < 0 || c_ < 0 || h_ < 0 || w_ < 0) throw ShapeError("negative tensor dimension");
  }

  static Tensor zeros(int n, int c, int h, int w) { return Tensor(n, c, h, w); }

  std::size_t numel() const { return v.size(); }

  double& at(int i, int j, int y, int x) {
    return v[((static_cast<std::size_t>(i) * c + j) * h + y) * w + x];
  }
  double at(int i, int j, int y, int x) const {
    return v[((static_cast<std::size_t>(i) * c + j) * h + y) * w + x];
  }

  // Pointer to the start of one (batch, channel) plane.
  double* plane(int i, int j) { return v.data() + (static_cast<std::size_t>(i) * c + j) * h * w; }
  const double* plane(int i, int j) const {
    return v.data() + (static_cast<std::size_t>(i) * c + j) * h * w;
  }

  bool same_shape(const Tensor& o) const { return n == o.n && c == o.c && h == o.h && w == o.w; }

  std::string shape_str() const;
};

// Throws Error when any element is NaN or infinite.
void ensure_finite(const Tensor& t, const std::string& what);
void ensure_finite(const std::vector<double>& v, const std::string& what);

}  // namespace ailsr
