#pragma once

#include <cstdint>
#include <functional>

#include "chac/numeric/mlp.hpp"

namespace chac::numeric {

// Returns the scalar loss at `params`. When `grads` is non-null it must also
// be filled with the analytic gradient.
using LossFn =
    std::function<double(const MlpParameters& params, MlpGradients* grads)>;

struct GradientCheckReport {
  double max_relative_error = 0.0;
  int worst_layer = -1;
  bool passed = true;
};

// Compares the analytic gradient of `loss` against central finite
// differences. Per component the error is
//   |analytic - numeric| / max(|analytic|, |numeric|, 1e-8)
// and the maximum over all components is reported.
GradientCheckReport GradientCheck(const MlpParameters& params,
                                  const LossFn& loss, double tolerance,
                                  double step = 1e-5);

struct GradientSuiteReport {
  int networks = 0;
  double max_relative_error = 0.0;
  double seconds = 0.0;
};

// Gradient checks on random small ReLU networks (up to 3 hidden layers,
// widths up to 16, either output activation) under a mixed linear +
// quadratic loss on a random input batch.
GradientSuiteReport RandomNetworkGradientSuite(int networks, std::uint64_t seed);

}  // namespace chac::numeric
