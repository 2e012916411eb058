#pragma once

#include <span>
#include <string>
#include <vector>

#include "ailsr/errors.hpp"

namespace ailsr {

// SGD with momentum, weight decay and adaptive elementwise gradient clipping:
// each gradient element is limited to +-(clip / lr) before the velocity
// update, so the applied step stays within +-clip as the schedule decays.
//
//   g' = clamp(g, -clip/lr, +clip/lr)
//   v  = momentum * v + g' + weight_decay * p
//   p  = p - lr * v
struct OptimizerState {
  double momentum = 0.9;
  double weight_decay = 1e-4;
  double clip = 0.4;  // infinity disables clipping
  double lr = 0.1;
  std::vector<std::vector<double>> velocity;  // one buffer per parameter array

  void validate() const;
};

struct ParamView {
  std::string name;
  std::span<double> values;
  std::span<const double> grads;
};

// Updates every parameter array in place. Velocity buffers are created on
// first use and must mirror the parameter shapes afterwards. A non-finite
// gradient raises an Error naming the offending array.
void sgd_step(std::vector<ParamView>& params, OptimizerState& state);

}  // namespace ailsr
