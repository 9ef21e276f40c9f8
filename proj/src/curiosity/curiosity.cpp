#include "chac/curiosity/curiosity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "chac/numeric/serialize.hpp"

namespace chac::curiosity {

using hindsight::Transition;

double RawCuriosity(const Vec& next_state, const Vec& predicted) {
  if (next_state.size() != predicted.size() || next_state.size() == 0) {
    throw InvalidInput("curiosity: dimension mismatch");
  }
  return (next_state - predicted).squaredNorm() /
         static_cast<double>(next_state.size()) / 2.0;
}

double Mix(double eta, double extrinsic, double curiosity) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw InvalidInput("eta must lie in [0, 1]");
  return eta * extrinsic + (1.0 - eta) * curiosity;
}

// ---- ForwardModel ----

ForwardModel::ForwardModel(std::vector<Bounds> state_bounds,
                           std::vector<Bounds> action_bounds,
                           const ForwardModelOptions& options, Rng& init_rng)
    : state_bounds_(std::move(state_bounds)),
      action_bounds_(std::move(action_bounds)),
      learning_rate_(options.learning_rate) {
  if (state_bounds_.empty() || action_bounds_.empty()) {
    throw InvalidInput("forward model needs non-empty state and action spaces");
  }
  std::vector<int> widths = {input_dim()};
  widths.insert(widths.end(), options.hidden.begin(), options.hidden.end());
  widths.push_back(state_dim());
  net_ = numeric::MakeMlp(widths, numeric::OutputActivation::kIdentity,
                          init_rng);
  opt_ = numeric::AdamState::For(net_);
}

Mat ForwardModel::Inputs(std::span<const Transition> batch) const {
  const int sd = state_dim();
  const int ad = action_dim();
  Mat in(sd + ad, static_cast<Eigen::Index>(batch.size()));
  for (std::size_t j = 0; j < batch.size(); ++j) {
    const Transition& t = batch[j];
    if (t.state.size() != sd || t.action.size() != ad ||
        t.next_state.size() != sd) {
      throw InvalidInput("forward model: transition has wrong dimensions");
    }
    for (int d = 0; d < sd; ++d) {
      in(d, j) = (t.state(d) - state_bounds_[d].center()) /
                 state_bounds_[d].half_range();
    }
    for (int d = 0; d < ad; ++d) {
      in(sd + d, j) = (t.action(d) - action_bounds_[d].center()) /
                      action_bounds_[d].half_range();
    }
  }
  return in;
}

Vec ForwardModel::Predict(const Vec& state, const Vec& action) const {
  Transition t;
  t.state = state;
  t.action = action;
  t.next_state = state;
  if (state.size() != state_dim() || action.size() != action_dim()) {
    throw InvalidInput("forward model: input has wrong dimensions");
  }
  return numeric::Forward(net_, Inputs(std::span<const Transition>(&t, 1)))
      .col(0);
}

double ForwardModel::LossAndGradient(std::span<const Transition> batch,
                                     numeric::MlpGradients* grads) const {
  if (batch.empty()) throw InvalidInput("empty forward-model batch");
  const double n = static_cast<double>(batch.size());
  const double dim = static_cast<double>(state_dim());
  numeric::ForwardCache cache;
  const Mat pred = numeric::Forward(net_, Inputs(batch), grads ? &cache : nullptr);
  Mat target(state_dim(), pred.cols());
  for (std::size_t j = 0; j < batch.size(); ++j) {
    target.col(static_cast<Eigen::Index>(j)) = batch[j].next_state;
  }
  const Mat err = pred - target;
  const double loss = err.squaredNorm() / (2.0 * dim * n);
  if (grads != nullptr) {
    *grads = numeric::Backward(net_, cache, err / (dim * n)).param_grads;
  }
  return loss;
}

double ForwardModel::Loss(std::span<const Transition> batch) const {
  return LossAndGradient(batch, nullptr);
}

numeric::MlpGradients ForwardModel::LossGradient(
    std::span<const Transition> batch) const {
  numeric::MlpGradients g;
  LossAndGradient(batch, &g);
  return g;
}

double ForwardModel::Train(std::span<const Transition> batch) {
  numeric::MlpGradients g;
  const double loss = LossAndGradient(batch, &g);
  if (!std::isfinite(loss)) return std::numeric_limits<double>::quiet_NaN();
  try {
    numeric::AdamStep(net_, g, opt_, learning_rate_);
  } catch (const NonFiniteError&) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  return loss;
}

void ForwardModel::Save(const std::filesystem::path& dir,
                        const std::string& prefix) const {
  numeric::SaveMlp(dir / (prefix + "_forward.bin"), net_);
  numeric::SaveAdam(dir / (prefix + "_forward_adam.bin"), opt_);
}

void ForwardModel::Load(const std::filesystem::path& dir,
                        const std::string& prefix) {
  auto net = numeric::LoadMlp(dir / (prefix + "_forward.bin"));
  if (net.input_dim() != net_.input_dim() ||
      net.output_dim() != net_.output_dim() ||
      net.layers.size() != net_.layers.size()) {
    throw InvalidInput(prefix + "_forward: checkpoint shape does not fit layer");
  }
  opt_ = numeric::LoadAdam(dir / (prefix + "_forward_adam.bin"));
  net_ = std::move(net);
}

// ---- CuriosityNormalizer ----

CuriosityNormalizer::CuriosityNormalizer(std::optional<std::size_t> capacity)
    : capacity_(capacity) {
  if (capacity_ && *capacity_ == 0) {
    throw InvalidInput("normalizer capacity must be positive");
  }
}

void CuriosityNormalizer::Rescan() {
  const auto [lo, hi] = std::minmax_element(history_.begin(), history_.end());
  min_ = *lo;
  max_ = *hi;
}

double CuriosityNormalizer::Normalize(double raw) {
  if (!(raw >= 0.0) || !std::isfinite(raw)) {
    throw InvalidInput("raw curiosity must be finite and non-negative");
  }
  bool rescan = false;
  if (capacity_ && history_.size() == *capacity_) {
    const double evicted = history_.front();
    history_.pop_front();
    rescan = evicted == min_ || evicted == max_;
  }
  history_.push_back(raw);
  if (history_.size() == 1) {
    min_ = max_ = raw;
  } else if (rescan) {
    Rescan();
  } else {
    min_ = std::min(min_, raw);
    max_ = std::max(max_, raw);
  }
  return Peek(raw);
}

double CuriosityNormalizer::Peek(double raw) const {
  if (history_.empty() || !(max_ > min_)) return -1.0;
  const double clipped = std::clamp(raw, min_, max_);
  return (clipped - min_) / (max_ - min_) - 1.0;
}

}  // namespace chac::curiosity
