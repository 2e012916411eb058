#include "ailsr/optim.hpp"

#include <algorithm>
#include <cmath>

namespace ailsr {

void OptimizerState::validate() const {
  if (!(momentum >= 0.0 && momentum < 1.0)) throw DomainError("optimizer: momentum must be in [0,1)");
  if (!(weight_decay >= 0.0)) throw DomainError("optimizer: weight_decay must be >= 0");
  if (!(clip > 0.0)) throw DomainError("optimizer: clip must be > 0");
  if (!(lr > 0.0)) throw DomainError("optimizer: lr must be > 0");
}

void sgd_step(std::vector<ParamView>& params, OptimizerState& state) {
  state.validate();
  if (state.velocity.empty()) {
    state.velocity.resize(params.size());
    for (std::size_t i = 0; i < params.size(); ++i) {
      state.velocity[i].assign(params[i].values.size(), 0.0);
    }
  }
  if (state.velocity.size() != params.size()) {
    throw ShapeError("sgd_step: velocity buffer count " + std::to_string(state.velocity.size()) +
                     " does not match parameter array count " + std::to_string(params.size()));
  }

  const double limit = std::isinf(state.clip) ? state.clip : state.clip / state.lr;
  for (std::size_t i = 0; i < params.size(); ++i) {
    ParamView& p = params[i];
    std::vector<double>& vel = state.velocity[i];
    if (vel.size() != p.values.size() || p.grads.size() != p.values.size()) {
      throw ShapeError("sgd_step: shape mismatch for parameter array '" + p.name + "'");
    }
    for (std::size_t k = 0; k < p.values.size(); ++k) {
      const double g = p.grads[k];
      if (!std::isfinite(g)) {
        throw Error("sgd_step: non-finite gradient in parameter array '" + p.name + "'");
      }
      const double clipped = std::clamp(g, -limit, limit);
      vel[k] = state.momentum * vel[k] + clipped + state.weight_decay * p.values[k];
      p.values[k] -= state.lr * vel[k];
    }
  }
}

}  // namespace ailsr
