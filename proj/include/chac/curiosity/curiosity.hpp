#pragma once

#include <cstddef>
#include <deque>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "chac/hindsight/transition.hpp"
#include "chac/numeric/adam.hpp"
#include "chac/numeric/mlp.hpp"

namespace chac::curiosity {

// Mean over dimensions of the squared error, halved.
double RawCuriosity(const Vec& next_state, const Vec& predicted);

// eta * extrinsic + (1 - eta) * curiosity.
double Mix(double eta, double extrinsic, double curiosity);

struct ForwardModelOptions {
  std::vector<int> hidden = {256, 256, 256};
  double learning_rate = 1e-3;
};

// Learned map (state, action) -> predicted next state for one layer. Inputs
// are range-scaled; the output is in raw state units.
class ForwardModel {
 public:
  ForwardModel(std::vector<Bounds> state_bounds,
               std::vector<Bounds> action_bounds,
               const ForwardModelOptions& options, Rng& init_rng);

  int state_dim() const { return static_cast<int>(state_bounds_.size()); }
  int action_dim() const { return static_cast<int>(action_bounds_.size()); }
  int input_dim() const { return state_dim() + action_dim(); }

  Vec Predict(const Vec& state, const Vec& action) const;

  // Batch loss: mean over samples of RawCuriosity(s', predict(s, a)).
  double Loss(std::span<const hindsight::Transition> batch) const;

  // One ADAM step on the batch loss. Returns the pre-step loss, or NaN when
  // the loss or its gradient was not finite (parameters untouched).
  double Train(std::span<const hindsight::Transition> batch);

  // Analytic gradient of Loss(batch), for gradient checking.
  numeric::MlpGradients LossGradient(
      std::span<const hindsight::Transition> batch) const;

  numeric::MlpParameters& net() { return net_; }
  const numeric::MlpParameters& net() const { return net_; }
  const numeric::AdamState& optimizer() const { return opt_; }

  void Save(const std::filesystem::path& dir, const std::string& prefix) const;
  void Load(const std::filesystem::path& dir, const std::string& prefix);

  Mat Inputs(std::span<const hindsight::Transition> batch) const;

 private:
  double LossAndGradient(std::span<const hindsight::Transition> batch,
                         numeric::MlpGradients* grads) const;

  std::vector<Bounds> state_bounds_;
  std::vector<Bounds> action_bounds_;
  double learning_rate_;
  numeric::MlpParameters net_;
  numeric::AdamState opt_;
};

// Bounded FIFO history of raw curiosity values and its extrema.
class CuriosityNormalizer {
 public:
  // std::nullopt keeps the whole history.
  explicit CuriosityNormalizer(std::optional<std::size_t> capacity = 10000);

  // Appends `raw` to the history, then maps it linearly so that the current
  // maximum goes to 0 and the minimum to -1. A degenerate history (all
  // values equal) yields -1. Throws InvalidInput for raw < 0 or NaN.
  double Normalize(double raw);

  // Map `raw` against the current extrema without recording it.
  double Peek(double raw) const;

  bool empty() const { return history_.empty(); }
  std::size_t size() const { return history_.size(); }
  double min() const { return min_; }
  double max() const { return max_; }
  const std::deque<double>& history() const { return history_; }

 private:
  void Rescan();

  std::optional<std::size_t> capacity_;
  std::deque<double> history_;
  double min_ = 0.0;
  double max_ = 0.0;
};

}  // namespace chac::curiosity
