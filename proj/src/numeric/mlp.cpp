#include "chac/numeric/mlp.hpp"

#include <cmath>
#include <sstream>

namespace chac::numeric {

namespace {

void ApplyOutput(OutputActivation act, Mat& z) {
  if (act == OutputActivation::kTanh) z = z.array().tanh().matrix();
}

std::string ShapeMessage(const char* what, Eigen::Index got,
                         Eigen::Index want) {
  std::ostringstream os;
  os << what << ": got " << got << ", expected " << want;
  return os.str();
}

}  // namespace

int MlpParameters::input_dim() const {
  return layers.empty() ? 0 : layers.front().in_dim();
}

int MlpParameters::output_dim() const {
  return layers.empty() ? 0 : layers.back().out_dim();
}

std::size_t MlpParameters::num_parameters() const {
  std::size_t n = 0;
  for (const auto& l : layers) n += l.weight.size() + l.bias.size();
  return n;
}

void MlpParameters::Validate() const {
  if (layers.empty()) throw InvalidInput("network has no layers");
  for (std::size_t j = 0; j < layers.size(); ++j) {
    const auto& l = layers[j];
    if (l.bias.size() != l.weight.rows()) {
      throw InvalidInput("layer " + std::to_string(j) +
                         ": bias length does not match weight rows");
    }
    if (j > 0 && layers[j - 1].out_dim() != l.in_dim()) {
      throw InvalidInput("layer " + std::to_string(j) +
                         ": input width does not chain with previous layer");
    }
    if (!l.weight.allFinite() || !l.bias.allFinite()) {
      throw InvalidInput("layer " + std::to_string(j) +
                         ": non-finite parameter");
    }
  }
}

MlpGradients MlpParameters::ZeroGradients() const {
  MlpGradients g(layers.size());
  for (std::size_t j = 0; j < layers.size(); ++j) {
    g[j].weight = Mat::Zero(layers[j].weight.rows(), layers[j].weight.cols());
    g[j].bias = Vec::Zero(layers[j].bias.size());
  }
  return g;
}

MlpParameters MakeMlp(std::span<const int> widths, OutputActivation output,
                      Rng& rng) {
  if (widths.size() < 2) throw InvalidInput("need at least input and output width");
  for (int w : widths) {
    if (w <= 0) throw InvalidInput("layer widths must be positive");
  }
  MlpParameters p;
  p.output_activation = output;
  for (std::size_t j = 0; j + 1 < widths.size(); ++j) {
    const int in = widths[j];
    const int out = widths[j + 1];
    const double limit = 1.0 / std::sqrt(static_cast<double>(in));
    std::uniform_real_distribution<double> dist(-limit, limit);
    DenseLayer layer;
    layer.weight.resize(out, in);
    // row-major fill so the draw order matches the serialized layout
    for (int r = 0; r < out; ++r) {
      for (int c = 0; c < in; ++c) layer.weight(r, c) = dist(rng);
    }
    layer.bias = Vec::Zero(out);
    p.layers.push_back(std::move(layer));
  }
  return p;
}

Mat Forward(const MlpParameters& params, const Mat& input,
            ForwardCache* cache) {
  if (params.layers.empty()) throw InvalidInput("network has no layers");
  if (input.rows() != params.input_dim()) {
    throw InvalidInput(
        ShapeMessage("input length", input.rows(), params.input_dim()));
  }
  if (cache != nullptr) {
    cache->activations.clear();
    cache->pre_activations.clear();
    cache->shapes.clear();
    cache->revision = params.revision;
    cache->activations.push_back(input);
  }
  Mat x = input;
  const std::size_t n = params.layers.size();
  for (std::size_t j = 0; j < n; ++j) {
    const auto& l = params.layers[j];
    Mat z = l.weight * x;
    z.colwise() += l.bias;
    if (cache != nullptr) {
      cache->pre_activations.push_back(z);
      cache->shapes.emplace_back(l.out_dim(), l.in_dim());
    }
    if (j + 1 < n) {
      x = z.cwiseMax(0.0);
    } else {
      ApplyOutput(params.output_activation, z);
      x = std::move(z);
    }
    if (cache != nullptr) cache->activations.push_back(x);
  }
  return x;
}

Vec Forward(const MlpParameters& params, const Vec& input,
            ForwardCache* cache) {
  Mat out = Forward(params, Mat(input), cache);
  return out.col(0);
}

BackwardResult Backward(const MlpParameters& params, const ForwardCache& cache,
                        const Mat& output_grad) {
  const std::size_t n = params.layers.size();
  if (cache.revision != params.revision || cache.shapes.size() != n ||
      cache.pre_activations.size() != n || cache.activations.size() != n + 1) {
    throw InvalidInput("forward cache does not belong to these parameters");
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (cache.shapes[j] != std::make_pair(params.layers[j].out_dim(),
                                          params.layers[j].in_dim())) {
      throw InvalidInput("forward cache shape mismatch at layer " +
                         std::to_string(j));
    }
  }
  if (output_grad.rows() != params.output_dim() ||
      output_grad.cols() != cache.batch_size()) {
    throw InvalidInput("output gradient shape does not match forward pass");
  }

  BackwardResult result;
  result.param_grads.resize(n);

  // delta = dL/dz for the current layer
  Mat delta = output_grad;
  if (params.output_activation == OutputActivation::kTanh) {
    const Mat& y = cache.activations[n];
    delta = delta.cwiseProduct((1.0 - y.array().square()).matrix());
  }
  for (std::size_t jj = n; jj-- > 0;) {
    const auto& l = params.layers[jj];
    const Mat& x = cache.activations[jj];
    result.param_grads[jj].weight = delta * x.transpose();
    result.param_grads[jj].bias = delta.rowwise().sum();
    Mat dx = l.weight.transpose() * delta;
    if (jj > 0) {
      const Mat& z = cache.pre_activations[jj - 1];
      delta = dx.cwiseProduct((z.array() > 0.0).cast<double>().matrix());
    } else {
      result.input_grad = std::move(dx);
    }
  }
  return result;
}

double MaxAbsDifference(const MlpParameters& a, const MlpParameters& b) {
  if (a.layers.size() != b.layers.size()) {
    throw InvalidInput("networks have different depth");
  }
  double m = 0.0;
  for (std::size_t j = 0; j < a.layers.size(); ++j) {
    if (a.layers[j].weight.rows() != b.layers[j].weight.rows() ||
        a.layers[j].weight.cols() != b.layers[j].weight.cols()) {
      throw InvalidInput("networks have different shapes");
    }
    m = std::max(m, (a.layers[j].weight - b.layers[j].weight).cwiseAbs().maxCoeff());
    m = std::max(m, (a.layers[j].bias - b.layers[j].bias).cwiseAbs().maxCoeff());
  }
  return m;
}

}  // namespace chac::numeric
