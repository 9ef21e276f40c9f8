#include "chac/numeric/adam.hpp"

#include <cmath>

namespace chac::numeric {

AdamState AdamState::For(const MlpParameters& params, double beta1,
                         double beta2, double epsilon) {
  AdamState s;
  s.first_moment = params.ZeroGradients();
  s.second_moment = params.ZeroGradients();
  s.beta1 = beta1;
  s.beta2 = beta2;
  s.epsilon = epsilon;
  return s;
}

void AdamStep(MlpParameters& params, const MlpGradients& grads,
              AdamState& state, double learning_rate) {
  if (!(learning_rate > 0.0)) throw InvalidInput("learning rate must be > 0");
  const std::size_t n = params.layers.size();
  if (grads.size() != n || state.first_moment.size() != n ||
      state.second_moment.size() != n) {
    throw InvalidInput("gradient / optimizer state depth mismatch");
  }
  for (std::size_t j = 0; j < n; ++j) {
    const auto& p = params.layers[j];
    const auto& g = grads[j];
    if (g.weight.rows() != p.weight.rows() || g.weight.cols() != p.weight.cols() ||
        g.bias.size() != p.bias.size() ||
        state.first_moment[j].weight.size() != p.weight.size() ||
        state.second_moment[j].weight.size() != p.weight.size()) {
      throw InvalidInput("gradient shape mismatch at layer " + std::to_string(j));
    }
    if (!g.weight.allFinite() || !g.bias.allFinite()) {
      throw NonFiniteError(
          "non-finite gradient at layer " + std::to_string(j),
          static_cast<int>(j));
    }
  }

  state.step_count += 1;
  const double t = static_cast<double>(state.step_count);
  const double c1 = 1.0 - std::pow(state.beta1, t);
  const double c2 = 1.0 - std::pow(state.beta2, t);
  const double b1 = state.beta1;
  const double b2 = state.beta2;
  const double eps = state.epsilon;

  auto update = [&](auto& param, const auto& grad, auto& m, auto& v) {
    m = b1 * m + (1.0 - b1) * grad;
    v = b2 * v + (1.0 - b2) * grad.cwiseProduct(grad);
    param.array() -= learning_rate * (m.array() / c1) /
                     ((v.array() / c2).sqrt() + eps);
  };
  for (std::size_t j = 0; j < n; ++j) {
    update(params.layers[j].weight, grads[j].weight,
           state.first_moment[j].weight, state.second_moment[j].weight);
    update(params.layers[j].bias, grads[j].bias, state.first_moment[j].bias,
           state.second_moment[j].bias);
  }
  params.revision += 1;
}

}  // namespace chac::numeric
