#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ailsr/conv.hpp"
#include "ailsr/optim.hpp"
#include "ailsr/tensor.hpp"

namespace ailsr {

// A member of the 20-layer conv+ReLU family with a global residual skip.
// `ratio` removes a fixed fraction of feature maps from every layer relative
// to the teacher width `base_width`; the derived width is
// round(base_width * (1 - ratio)) with half-up rounding.
struct ModelSpec {
  int depth = 20;         // total conv layers (first + middles + last)
  int base_width = 64;    // teacher feature maps
  double ratio = 0.0;     // 0 keeps the teacher width
  int in_channels = 1;    // luminance plane
  std::uint64_t seed = 0;

  int width() const;
  void validate() const;
  bool operator==(const ModelSpec&) const = default;
};

struct Network {
  ModelSpec spec;
  std::vector<ConvParams> layers;  // first: in->F, middles: F->F, last: F->in
};

// Deterministic He-normal weights (std = sqrt(2 / (in_ch*kh*kw))), zero biases.
Network build_network(const ModelSpec& spec);

// Inference: output = x + residual_branch(x). Shape preserved.
Tensor forward(const Network& net, const Tensor& x);

// Forward pass retaining pre-activation outputs for backpropagation.
struct ForwardTrace {
  Tensor input;
  std::vector<Tensor> pre;  // conv output of each layer, before ReLU
  Tensor output;            // input + last conv output
};

ForwardTrace forward_train(const Network& net, const Tensor& x);

struct NetworkGrads {
  std::vector<std::vector<double>> weights;  // per layer
  std::vector<std::vector<double>> biases;

  void init_like(const Network& net);
};

// Backpropagates d(loss)/d(output) through the trace; fills `grads` and
// returns d(loss)/d(input) (which includes the residual skip contribution).
Tensor backward(const Network& net, const ForwardTrace& trace, const Tensor& grad_output,
                NetworkGrads& grads);

// Parameter arrays in a fixed order (layer0.weights, layer0.biases, ...),
// suitable for sgd_step and checkpointing.
std::vector<ParamView> param_views(Network& net, NetworkGrads& grads);

// Exact stored-scalar count including biases:
//   F*9*in + F + (D-2)*(F^2*9 + F) + in*9*F + in
std::int64_t count_params(const ModelSpec& spec);

// 2 * multiply-accumulate count for one (h, w) input plane:
//   2 * h * w * sum_layers(out_ch * in_ch * 9).
// Counts convolution MACs only (bias adds, ReLU and the residual add are
// excluded); each MAC counts as two floating point operations.
std::int64_t count_flops(const ModelSpec& spec, int h, int w);

struct CheckpointMeta {
  std::string scheme = "none";
  int epoch = 0;
  std::uint64_t seed = 0;
  std::string config_hash;
};

void save_checkpoint(const Network& net, const std::filesystem::path& path,
                     const CheckpointMeta& meta,
                     const OptimizerState* optimizer = nullptr);

struct LoadedCheckpoint {
  Network net;
  CheckpointMeta meta;
  std::optional<OptimizerState> optimizer;
};

LoadedCheckpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace ailsr
