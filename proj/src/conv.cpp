#include "ailsr/conv.hpp"

#include <algorithm>

namespace ailsr {

namespace {

void check_conv_shapes(const Tensor& input, const ConvParams& p, int pad) {
  if (input.c != p.in_ch) {
    throw ShapeError("conv2d: input has " + std::to_string(input.c) + " channels (shape " +
                     input.shape_str() + ") but filter bank expects " + std::to_string(p.in_ch) +
                     " (weights " + std::to_string(p.out_ch) + "x" + std::to_string(p.in_ch) + "x" +
                     std::to_string(p.kh) + "x" + std::to_string(p.kw) + ")");
  }
  if (pad < 0) throw ShapeError("conv2d: negative padding");
  if (input.h + 2 * pad - p.kh + 1 < 1 || input.w + 2 * pad - p.kw + 1 < 1) {
    throw ShapeError("conv2d: kernel " + std::to_string(p.kh) + "x" + std::to_string(p.kw) +
                     " larger than padded input " + input.shape_str());
  }
}

}  // namespace

Tensor conv2d_forward(const Tensor& input, const ConvParams& params, int pad) {
  check_conv_shapes(input, params, pad);
  const int oh = input.h + 2 * pad - params.kh + 1;
  const int ow = input.w + 2 * pad - params.kw + 1;
  Tensor out(input.n, params.out_ch, oh, ow);

  for (int b = 0; b < input.n; ++b) {
    for (int oc = 0; oc < params.out_ch; ++oc) {
      double* o = out.plane(b, oc);
      const double bias = params.biases[static_cast<std::size_t>(oc)];
      std::fill(o, o + static_cast<std::size_t>(oh) * ow, bias);
      for (int ic = 0; ic < params.in_ch; ++ic) {
        const double* x = input.plane(b, ic);
        for (int ky = 0; ky < params.kh; ++ky) {
          const int y0 = std::max(0, pad - ky);
          const int y1 = std::min(oh, input.h + pad - ky);
          for (int kx = 0; kx < params.kw; ++kx) {
            const double wgt = params.wt(oc, ic, ky, kx);
            const int x0 = std::max(0, pad - kx);
            const int x1 = std::min(ow, input.w + pad - kx);
            for (int oy = y0; oy < y1; ++oy) {
              const double* xrow = x + static_cast<std::size_t>(oy + ky - pad) * input.w + (kx - pad);
              double* orow = o + static_cast<std::size_t>(oy) * ow;
              for (int ox = x0; ox < x1; ++ox) orow[ox] += wgt * xrow[ox];
            }
          }
        }
      }
    }
  }
  ensure_finite(out, "conv2d_forward");
  return out;
}

ConvGrads conv2d_backward(const Tensor& input, const ConvParams& params, const Tensor& grad_out,
                          int pad) {
  check_conv_shapes(input, params, pad);
  const int oh = input.h + 2 * pad - params.kh + 1;
  const int ow = input.w + 2 * pad - params.kw + 1;
  if (grad_out.n != input.n || grad_out.c != params.out_ch || grad_out.h != oh ||
      grad_out.w != ow) {
    throw ShapeError("conv2d_backward: grad_out shape " + grad_out.shape_str() +
                     " does not match forward output " + std::to_string(input.n) + "x" +
                     std::to_string(params.out_ch) + "x" + std::to_string(oh) + "x" +
                     std::to_string(ow));
  }

  ConvGrads g;
  g.grad_input = Tensor(input.n, input.c, input.h, input.w);
  g.grad_weights.assign(params.weights.size(), 0.0);
  g.grad_biases.assign(params.biases.size(), 0.0);

  for (int b = 0; b < input.n; ++b) {
    for (int oc = 0; oc < params.out_ch; ++oc) {
      const double* go = grad_out.plane(b, oc);
      double bsum = 0.0;
      for (std::size_t i = 0; i < static_cast<std::size_t>(oh) * ow; ++i) bsum += go[i];
      g.grad_biases[static_cast<std::size_t>(oc)] += bsum;

      for (int ic = 0; ic < params.in_ch; ++ic) {
        const double* x = input.plane(b, ic);
        double* gx = g.grad_input.plane(b, ic);
        for (int ky = 0; ky < params.kh; ++ky) {
          const int y0 = std::max(0, pad - ky);
          const int y1 = std::min(oh, input.h + pad - ky);
          for (int kx = 0; kx < params.kw; ++kx) {
            const int x0 = std::max(0, pad - kx);
            const int x1 = std::min(ow, input.w + pad - kx);
            const double wgt = params.wt(oc, ic, ky, kx);
            double wsum = 0.0;
            for (int oy = y0; oy < y1; ++oy) {
              const double* xrow = x + static_cast<std::size_t>(oy + ky - pad) * input.w + (kx - pad);
              double* gxrow = gx + static_cast<std::size_t>(oy + ky - pad) * input.w + (kx - pad);
              const double* gorow = go + static_cast<std::size_t>(oy) * ow;
              for (int ox = x0; ox < x1; ++ox) {
                wsum += gorow[ox] * xrow[ox];
                gxrow[ox] += wgt * gorow[ox];
              }
            }
            g.grad_weights[((static_cast<std::size_t>(oc) * params.in_ch + ic) * params.kh + ky) *
                               params.kw +
                           kx] += wsum;
          }
        }
      }
    }
  }
  ensure_finite(g.grad_input, "conv2d_backward");
  ensure_finite(g.grad_weights, "conv2d_backward grad_weights");
  ensure_finite(g.grad_biases, "conv2d_backward grad_biases");
  return g;
}

Tensor relu_forward(const Tensor& input) {
  Tensor out = input;
  for (double& x : out.v) x = x > 0.0 ? x : 0.0;
  return out;
}

Tensor relu_backward(const Tensor& input, const Tensor& grad_out) {
  if (!input.same_shape(grad_out)) {
    throw ShapeError("relu_backward: input " + input.shape_str() + " vs grad_out " +
                     grad_out.shape_str());
  }
  Tensor out = grad_out;
  for (std::size_t i = 0; i < out.v.size(); ++i) {
    if (input.v[i] <= 0.0) out.v[i] = 0.0;
  }
  return out;
}

}  // namespace ailsr
