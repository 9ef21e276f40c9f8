#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "chac/hindsight/transition.hpp"
#include "chac/numeric/adam.hpp"
#include "chac/numeric/mlp.hpp"

namespace chac::policy {

// Spaces, discount and horizon of one hierarchy layer. Above layer 0 the
// action space is the goal space of the layer below.
struct LayerUmdp {
  int layer_index = 0;
  int state_dim = 0;
  int goal_dim = 0;
  int action_dim = 0;
  double gamma = 0.98;
  int horizon = 10;
  std::vector<Bounds> action_bounds;
  std::vector<Bounds> goal_bounds;
  std::vector<Bounds> state_bounds;  // nominal; used for input scaling only

  void Validate() const;
};

struct NoiseSpec {
  double random_action_prob = 0.1;  // epsilon of the epsilon-greedy draw
  double sigma = 0.05;              // Gaussian std as a fraction of range

  void Validate() const;
};

struct ActorCriticOptions {
  std::vector<int> hidden = {64, 64, 64};
  double learning_rate = 1e-3;
};

struct UpdateStats {
  double critic_loss = 0.0;
  double actor_objective = 0.0;
  bool skipped = false;  // non-finite loss or gradient; nothing changed
};

// Goal-conditioned deterministic actor and Q critic over the concatenated,
// range-scaled inputs state || goal (|| action).
class ActorCritic {
 public:
  ActorCritic(LayerUmdp umdp, const ActorCriticOptions& options, Rng& init_rng);

  const LayerUmdp& umdp() const { return umdp_; }

  // Noise-free actor output, inside action bounds.
  Vec Act(const Vec& state, const Vec& goal) const;
  // Epsilon-greedy exploration around the actor output. `perturbed` reports
  // whether noise was applied (always true for this overload when the noise
  // spec is non-trivial).
  Vec Act(const Vec& state, const Vec& goal, const NoiseSpec& noise, Rng& rng,
          bool* perturbed = nullptr) const;

  double Q(const Vec& state, const Vec& goal, const Vec& action) const;

  // clip(r + gamma * Q(s', g, actor(s', g)), -H, 0), or clip(r, -H, 0) when
  // the transition is terminal.
  double BellmanTarget(const hindsight::Transition& t) const;
  Vec BellmanTargets(std::span<const hindsight::Transition> batch) const;

  // One critic step, then one actor step against the updated critic.
  UpdateStats Update(std::span<const hindsight::Transition> batch);
  // Each returns the pre-step loss / objective, or NaN if the step was
  // skipped.
  double UpdateCritic(std::span<const hindsight::Transition> batch);
  double UpdateActor(std::span<const hindsight::Transition> batch);

  numeric::MlpParameters& actor() { return actor_; }
  numeric::MlpParameters& critic() { return critic_; }
  const numeric::MlpParameters& actor() const { return actor_; }
  const numeric::MlpParameters& critic() const { return critic_; }
  const numeric::AdamState& actor_optimizer() const { return actor_opt_; }
  const numeric::AdamState& critic_optimizer() const { return critic_opt_; }

  // Files <prefix>_actor.bin, _critic.bin, _actor_adam.bin, _critic_adam.bin.
  void Save(const std::filesystem::path& dir, const std::string& prefix) const;
  // Throws InvalidInput when the stored shapes do not fit this layer.
  void Load(const std::filesystem::path& dir, const std::string& prefix);

  // Scaled network inputs, one column per sample.
  Mat ActorInputs(std::span<const hindsight::Transition> batch,
                  bool next_state) const;
  Mat CriticInputs(std::span<const hindsight::Transition> batch) const;

 private:
  void ScaleInto(Eigen::Ref<Vec> out, const Vec& x,
                 const std::vector<Bounds>& bounds) const;
  Vec ActorInput(const Vec& state, const Vec& goal) const;
  Vec Unsquash(const Vec& squashed) const;
  void CheckInBounds(const Vec& action) const;

  LayerUmdp umdp_;
  double learning_rate_;
  numeric::MlpParameters actor_;
  numeric::MlpParameters critic_;
  numeric::AdamState actor_opt_;
  numeric::AdamState critic_opt_;
};

}  // namespace chac::policy
