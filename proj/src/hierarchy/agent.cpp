#include "chac/hierarchy/agent.hpp"

#include <cmath>
#include <limits>

#include "chac/hierarchy/rollout.hpp"
#include "chac/hindsight/relabel.hpp"

namespace chac::hierarchy {

using hindsight::Transition;

void HierarchyConfig::Validate() const {
  if (num_layers < 1) throw InvalidInput("layers must be >= 1");
  if (horizon < 1) throw InvalidInput("horizon must be >= 1");
  if (!(subgoal_test_rate >= 0.0 && subgoal_test_rate <= 1.0)) {
    throw InvalidInput("subgoal_test_rate must lie in [0, 1]");
  }
  if (!gamma.empty() && static_cast<int>(gamma.size()) != num_layers &&
      gamma.size() != 1) {
    throw InvalidInput("gamma needs one value or one per layer");
  }
  for (double g : gamma) {
    if (!(g >= 0.0 && g < 1.0)) throw InvalidInput("gamma must lie in [0, 1)");
  }
  if (!noise.empty() && static_cast<int>(noise.size()) != num_layers) {
    throw InvalidInput("noise needs one entry per layer");
  }
  for (const auto& n : noise) n.Validate();
}

double HierarchyConfig::GammaFor(int layer) const {
  if (gamma.empty()) return 0.98;
  if (gamma.size() == 1) return gamma[0];
  return gamma.at(static_cast<std::size_t>(layer));
}

policy::NoiseSpec HierarchyConfig::NoiseFor(int layer) const {
  if (!noise.empty()) return noise.at(static_cast<std::size_t>(layer));
  policy::NoiseSpec n;
  n.random_action_prob = 0.1;
  n.sigma = layer == 0 ? 0.05 : 0.03;
  return n;
}

std::vector<policy::LayerUmdp> BuildLayerUmdps(const envs::EnvSpec& env,
                                               const HierarchyConfig& config) {
  config.Validate();
  std::vector<policy::LayerUmdp> out;
  for (int i = 0; i < config.num_layers; ++i) {
    policy::LayerUmdp u;
    u.layer_index = i;
    u.state_dim = env.state_dim;
    u.goal_dim = env.goal_dim;
    u.action_dim = i == 0 ? env.action_dim : env.goal_dim;
    u.action_bounds = i == 0 ? env.action_bounds : env.goal_bounds;
    u.goal_bounds = env.goal_bounds;
    u.state_bounds = env.state_bounds;
    u.gamma = config.GammaFor(i);
    u.horizon = config.horizon;
    u.Validate();
    out.push_back(std::move(u));
  }
  return out;
}

void AgentConfig::Validate() const {
  hierarchy.Validate();
  if (!(eta >= 0.0 && eta <= 1.0)) throw InvalidInput("eta must lie in [0, 1]");
  if (buffer_capacity == 0) throw InvalidInput("buffer_capacity must be > 0");
  if (normalizer_capacity && *normalizer_capacity == 0) {
    throw InvalidInput("normalizer_capacity must be > 0");
  }
  if (batch_size == 0) throw InvalidInput("batch_size must be > 0");
  if (updates_per_round < 1) throw InvalidInput("updates_per_round must be >= 1");
  if (forward_updates_per_round < 0 ||
      forward_updates_per_round > updates_per_round) {
    throw InvalidInput(
        "forward_updates_per_round must lie in [0, updates_per_round]");
  }
  if (!(actor_critic.learning_rate > 0.0) ||
      !(forward_model.learning_rate > 0.0)) {
    throw InvalidInput("learning rate must be > 0");
  }
}

Agent::Agent(const envs::EnvSpec& env, AgentConfig config, Rng& init_rng)
    : config_(std::move(config)) {
  config_.Validate();
  const auto umdps = BuildLayerUmdps(env, config_.hierarchy);
  layers_.reserve(umdps.size());
  for (const auto& u : umdps) {
    Rng ac_rng(init_rng());
    Rng fw_rng(init_rng());
    Layer layer{policy::ActorCritic(u, config_.actor_critic, ac_rng),
                hindsight::ReplayBuffer(config_.buffer_capacity),
                std::nullopt,
                curiosity::CuriosityNormalizer(config_.normalizer_capacity)};
    if (config_.curiosity_enabled) {
      layer.forward_model.emplace(u.state_bounds, u.action_bounds,
                                  config_.forward_model, fw_rng);
    }
    layers_.push_back(std::move(layer));
  }
}

std::vector<LayerStoreStats> Agent::Store(const RolloutRecord& record,
                                          const envs::GoalEnv& env) {
  if (static_cast<int>(record.layers.size()) != num_layers()) {
    throw InvalidInput("rollout record has the wrong number of layers");
  }
  std::vector<LayerStoreStats> stats(layers_.size());
  const int horizon = config_.hierarchy.horizon;

  for (int i = 0; i < num_layers(); ++i) {
    Layer& layer = layers_[static_cast<std::size_t>(i)];
    LayerStoreStats& st = stats[static_cast<std::size_t>(i)];
    const LayerRecord& rec = record.layers[static_cast<std::size_t>(i)];

    for (std::size_t r = 0; r < rec.num_runs(); ++r) {
      std::vector<Transition> base;
      for (const Transition& raw : rec.run(r)) {
        Transition t = i > 0 ? hindsight::HindsightActionTransition(
                                   raw, raw.next_state, env)
                             : raw;
        if (layer.forward_model) {
          const Vec predicted = layer.forward_model->Predict(t.state, t.action);
          t.raw_curiosity = curiosity::RawCuriosity(t.next_state, predicted);
          t.curiosity_reward = layer.normalizer.Normalize(t.raw_curiosity);
          t.reward = curiosity::Mix(config_.eta, t.extrinsic_reward,
                                    t.curiosity_reward);
          st.raw_curiosity_sum += t.raw_curiosity;
          ++st.raw_curiosity_count;
        }
        layer.buffer.Add(t);
        ++st.stored;
        base.push_back(std::move(t));

        if (i > 0 && raw.test_mode) {
          auto penalty =
              hindsight::SubgoalTestTransition(raw, raw.subgoal_reached, horizon);
          if (penalty) {
            layer.buffer.Add(*penalty);
            ++st.stored;
            ++st.penalties;
          }
        }
      }
      for (Transition& h : hindsight::HindsightGoalTransitions(base, env)) {
        if (layer.forward_model) {
          h.reward =
              curiosity::Mix(config_.eta, h.extrinsic_reward, h.curiosity_reward);
        }
        layer.buffer.Add(std::move(h));
        ++st.stored;
      }
    }
  }
  return stats;
}

std::vector<LayerRoundStats> Agent::TrainRound(Rng& sample_rng) {
  std::vector<LayerRoundStats> stats(layers_.size());
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    Layer& layer = layers_[i];
    LayerRoundStats& st = stats[i];
    double fw_sum = 0.0;
    int fw_count = 0;
    for (int u = 0; u < config_.updates_per_round; ++u) {
      auto batch = layer.buffer.Sample(config_.batch_size, sample_rng);
      if (!batch) break;
      const auto s = layer.actor_critic.Update(*batch);
      if (s.skipped) {
        ++st.skipped;
      } else {
        st.critic_loss += s.critic_loss;
        st.actor_objective += s.actor_objective;
        ++st.batches;
      }
      if (layer.forward_model && u < config_.forward_updates_per_round) {
        const double loss = layer.forward_model->Train(*batch);
        if (std::isfinite(loss)) {
          fw_sum += loss;
          ++fw_count;
        } else {
          ++st.skipped;
        }
      }
    }
    if (st.batches > 0) {
      st.critic_loss /= st.batches;
      st.actor_objective /= st.batches;
    }
    st.forward_loss = fw_count > 0 ? fw_sum / fw_count
                                   : std::numeric_limits<double>::quiet_NaN();
  }
  return stats;
}

void Agent::Save(const std::filesystem::path& dir) const {
  std::filesystem::create_directories(dir);
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    const std::string prefix = "layer" + std::to_string(i);
    layers_[i].actor_critic.Save(dir, prefix);
    if (layers_[i].forward_model) layers_[i].forward_model->Save(dir, prefix);
  }
}

void Agent::Load(const std::filesystem::path& dir) {
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    const std::string prefix = "layer" + std::to_string(i);
    layers_[i].actor_critic.Load(dir, prefix);
    if (layers_[i].forward_model &&
        std::filesystem::exists(dir / (prefix + "_forward.bin"))) {
      layers_[i].forward_model->Load(dir, prefix);
    }
  }
}

}  // namespace chac::hierarchy
