#pragma once

#include <cstdint>

#include "chac/numeric/mlp.hpp"

namespace chac::numeric {

struct AdamState {
  MlpGradients first_moment;
  MlpGradients second_moment;
  std::uint64_t step_count = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  // Zero moments shaped like `params`.
  static AdamState For(const MlpParameters& params, double beta1 = 0.9,
                       double beta2 = 0.999, double epsilon = 1e-8);
};

// One bias-corrected ADAM update of `params` in place. On any non-finite
// gradient nothing is modified and NonFiniteError carries the layer index.
void AdamStep(MlpParameters& params, const MlpGradients& grads,
              AdamState& state, double learning_rate);

}  // namespace chac::numeric
