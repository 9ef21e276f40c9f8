#include "chac/numeric/gradient_check.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace chac::numeric {

namespace {

double RelativeError(double analytic, double numeric) {
  const double denom =
      std::max({std::abs(analytic), std::abs(numeric), 1e-8});
  return std::abs(analytic - numeric) / denom;
}

}  // namespace

GradientCheckReport GradientCheck(const MlpParameters& params,
                                  const LossFn& loss, double tolerance,
                                  double step) {
  MlpGradients analytic = params.ZeroGradients();
  loss(params, &analytic);

  GradientCheckReport report;
  MlpParameters probe = params;

  auto check = [&](double& slot, double analytic_value, int layer) {
    const double saved = slot;
    slot = saved + step;
    const double plus = loss(probe, nullptr);
    slot = saved - step;
    const double minus = loss(probe, nullptr);
    slot = saved;
    const double numeric = (plus - minus) / (2.0 * step);
    const double err = RelativeError(analytic_value, numeric);
    if (err > report.max_relative_error) {
      report.max_relative_error = err;
      report.worst_layer = layer;
    }
  };

  for (std::size_t j = 0; j < probe.layers.size(); ++j) {
    auto& w = probe.layers[j].weight;
    for (Eigen::Index r = 0; r < w.rows(); ++r) {
      for (Eigen::Index c = 0; c < w.cols(); ++c) {
        check(w(r, c), analytic[j].weight(r, c), static_cast<int>(j));
      }
    }
    auto& b = probe.layers[j].bias;
    for (Eigen::Index r = 0; r < b.size(); ++r) {
      check(b(r), analytic[j].bias(r), static_cast<int>(j));
    }
  }
  report.passed = report.max_relative_error < tolerance;
  return report;
}

GradientSuiteReport RandomNetworkGradientSuite(int networks,
                                               std::uint64_t seed) {
  const auto start = std::chrono::steady_clock::now();
  Rng rng(seed);
  std::uniform_int_distribution<int> width(1, 16);
  std::uniform_int_distribution<int> depth(0, 3);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  GradientSuiteReport report;
  for (int n = 0; n < networks; ++n) {
    std::vector<int> widths = {width(rng)};
    const int hidden = depth(rng);
    for (int h = 0; h < hidden; ++h) widths.push_back(width(rng));
    widths.push_back(width(rng));
    const auto act = (rng() & 1) ? OutputActivation::kTanh
                                 : OutputActivation::kIdentity;
    MlpParameters params = MakeMlp(widths, act, rng);
    for (auto& l : params.layers) {
      for (Eigen::Index r = 0; r < l.bias.size(); ++r) l.bias(r) = 0.1 * unit(rng);
    }
    Mat input(widths.front(), 3);
    for (Eigen::Index i = 0; i < input.size(); ++i) input(i) = unit(rng);
    Mat weights(widths.back(), 3);
    for (Eigen::Index i = 0; i < weights.size(); ++i) weights(i) = unit(rng);

    const LossFn loss = [&](const MlpParameters& p, MlpGradients* grads) {
      ForwardCache cache;
      const Mat out = Forward(p, input, grads ? &cache : nullptr);
      const double value =
          (weights.array() * out.array()).sum() + 0.5 * out.squaredNorm();
      if (grads != nullptr) *grads = Backward(p, cache, weights + out).param_grads;
      return value;
    };
    const auto r = GradientCheck(params, loss, 1e-4);
    report.max_relative_error =
        std::max(report.max_relative_error, r.max_relative_error);
    ++report.networks;
  }
  report.seconds = std::chrono::duration<double>(
                       std::chrono::steady_clock::now() - start)
                       .count();
  return report;
}

}  // namespace chac::numeric
