#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "chac/common.hpp"

namespace chac::numeric {

// Output nonlinearity of the last layer. Hidden layers are always ReLU.
enum class OutputActivation : std::uint32_t {
  kIdentity = 0,
  kTanh = 1,  // bounded squash into (-1, 1)
};

struct DenseLayer {
  Mat weight;  // out x in
  Vec bias;    // out

  int in_dim() const { return static_cast<int>(weight.cols()); }
  int out_dim() const { return static_cast<int>(weight.rows()); }
};

// Gradients share the parameter layout.
using MlpGradients = std::vector<DenseLayer>;

struct MlpParameters {
  std::vector<DenseLayer> layers;
  OutputActivation output_activation = OutputActivation::kIdentity;
  // Bumped on every in-place parameter update; forward caches record it.
  std::uint64_t revision = 0;

  int input_dim() const;
  int output_dim() const;
  std::size_t num_parameters() const;

  // Throws InvalidInput when layer dimensions do not chain or a value is
  // not finite.
  void Validate() const;

  // Gradient-shaped container of zeros.
  MlpGradients ZeroGradients() const;
};

// Builds a network with the given layer widths, e.g. {in, 64, 64, 64, out}.
// Weights uniform in [-1/sqrt(fan_in), 1/sqrt(fan_in)], biases zero.
MlpParameters MakeMlp(std::span<const int> widths, OutputActivation output,
                      Rng& rng);

// Pre- and post-activation values of a batched forward pass. Column j of
// every matrix belongs to sample j.
struct ForwardCache {
  std::vector<Mat> activations;     // activations[0] is the input batch
  std::vector<Mat> pre_activations;  // one per layer
  std::uint64_t revision = 0;
  std::vector<std::pair<int, int>> shapes;  // (out, in) per layer

  int batch_size() const {
    return activations.empty() ? 0 : static_cast<int>(activations[0].cols());
  }
  const Mat& output() const { return activations.back(); }
};

// Batched forward pass; `input` is in_dim x batch.
Mat Forward(const MlpParameters& params, const Mat& input,
            ForwardCache* cache = nullptr);

// Single-sample convenience wrapper.
Vec Forward(const MlpParameters& params, const Vec& input,
            ForwardCache* cache = nullptr);

struct BackwardResult {
  MlpGradients param_grads;  // summed over the batch
  Mat input_grad;            // in_dim x batch
};

// Exact gradients of sum_j <output_j, output_grad_j> with respect to every
// parameter and to the input. Rejects caches from a different network or an
// older revision of this one.
BackwardResult Backward(const MlpParameters& params, const ForwardCache& cache,
                        const Mat& output_grad);

// Largest absolute parameter difference between two same-shaped networks.
double MaxAbsDifference(const MlpParameters& a, const MlpParameters& b);

}  // namespace chac::numeric
