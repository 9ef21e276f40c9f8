#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <vector>

#include "chac/curiosity/curiosity.hpp"
#include "chac/envs/goal_env.hpp"
#include "chac/hindsight/replay_buffer.hpp"
#include "chac/policy/actor_critic.hpp"

namespace chac::hierarchy {

struct HierarchyConfig {
  int num_layers = 2;
  int horizon = 10;                // attempts per layer per goal
  double subgoal_test_rate = 0.3;  // lambda
  std::vector<double> gamma;       // per layer; empty -> 0.98 everywhere
  std::vector<policy::NoiseSpec> noise;  // per layer; empty -> defaults

  void Validate() const;
  double GammaFor(int layer) const;
  policy::NoiseSpec NoiseFor(int layer) const;
};

// Layer 0 acts in the environment's action space; every higher layer
// proposes subgoals in the goal space.
std::vector<policy::LayerUmdp> BuildLayerUmdps(const envs::EnvSpec& env,
                                               const HierarchyConfig& config);

struct AgentConfig {
  HierarchyConfig hierarchy;
  policy::ActorCriticOptions actor_critic;
  curiosity::ForwardModelOptions forward_model;
  bool curiosity_enabled = true;
  double eta = 0.5;
  std::size_t buffer_capacity = 200000;
  std::optional<std::size_t> normalizer_capacity = 10000;
  std::size_t batch_size = 1024;
  int updates_per_round = 10;         // actor-critic batches per round
  int forward_updates_per_round = 1;  // first n of those also train the model

  void Validate() const;
};

struct Layer {
  policy::ActorCritic actor_critic;
  hindsight::ReplayBuffer buffer;
  std::optional<curiosity::ForwardModel> forward_model;
  curiosity::CuriosityNormalizer normalizer;
};

struct LayerRoundStats {
  double critic_loss = 0.0;      // mean over the round's batches
  double actor_objective = 0.0;
  double forward_loss = 0.0;     // NaN without a forward model
  int batches = 0;
  int skipped = 0;               // non-finite updates
};

struct LayerStoreStats {
  std::size_t stored = 0;
  std::size_t penalties = 0;
  double raw_curiosity_sum = 0.0;
  std::size_t raw_curiosity_count = 0;
};

struct RolloutRecord;

// The k per-layer learners plus the experience pipeline that turns raw
// rollouts into replay: hindsight action / goal transitions, subgoal-testing
// penalties, and curiosity-mixed rewards.
class Agent {
 public:
  // Draws two seeds per layer from `init_rng` (actor-critic, forward model)
  // whether or not curiosity is enabled.
  Agent(const envs::EnvSpec& env, AgentConfig config, Rng& init_rng);

  const AgentConfig& config() const { return config_; }
  int num_layers() const { return static_cast<int>(layers_.size()); }
  Layer& layer(int i) { return layers_.at(static_cast<std::size_t>(i)); }
  const Layer& layer(int i) const { return layers_.at(static_cast<std::size_t>(i)); }

  std::vector<LayerStoreStats> Store(const RolloutRecord& record,
                                     const envs::GoalEnv& env);

  // One update round per layer, bottom-up.
  std::vector<LayerRoundStats> TrainRound(Rng& sample_rng);

  void Save(const std::filesystem::path& dir) const;
  void Load(const std::filesystem::path& dir);

 private:
  AgentConfig config_;
  std::vector<Layer> layers_;
};

}  // namespace chac::hierarchy
