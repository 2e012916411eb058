#pragma once

#include <vector>

#include "ailsr/tensor.hpp"

namespace ailsr {

// One convolution layer: a (out_ch, in_ch, kh, kw) filter bank plus a bias
// per output channel.
struct ConvParams {
  int out_ch = 0, in_ch = 0, kh = 0, kw = 0;
  std::vector<double> weights;  // row-major (out_ch, in_ch, kh, kw)
  std::vector<double> biases;   // out_ch

  ConvParams() = default;
  ConvParams(int oc, int ic, int kh_, int kw_)
      : out_ch(oc),
        in_ch(ic),
        kh(kh_),
        kw(kw_),
        weights(static_cast<std::size_t>(oc) * ic * kh_ * kw_, 0.0),
        biases(static_cast<std::size_t>(oc), 0.0) {}

  double& wt(int o, int i, int y, int x) {
    return weights[((static_cast<std::size_t>(o) * in_ch + i) * kh + y) * kw + x];
  }
  double wt(int o, int i, int y, int x) const {
    return weights[((static_cast<std::size_t>(o) * in_ch + i) * kh + y) * kw + x];
  }
};

// Zero-padded direct convolution. Output shape (n, out_ch, h+2p-kh+1, w+2p-kw+1);
// the network family in scope always uses 3x3 kernels with pad 1 so spatial
// size is preserved. The per-output reduction order is fixed (in_ch, ky, kx
// ascending), so results are bitwise reproducible.
Tensor conv2d_forward(const Tensor& input, const ConvParams& params, int pad);

struct ConvGrads {
  Tensor grad_input;
  std::vector<double> grad_weights;
  std::vector<double> grad_biases;
};

// Exact analytic gradients of sum(grad_out * conv2d_forward(input)) with
// respect to input, weights and biases.
ConvGrads conv2d_backward(const Tensor& input, const ConvParams& params, const Tensor& grad_out,
                          int pad);

Tensor relu_forward(const Tensor& input);

// Gradient convention at exactly 0: passes nothing (subgradient 0).
Tensor relu_backward(const Tensor& input, const Tensor& grad_out);

}  // namespace ailsr
