#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "chac/hierarchy/agent.hpp"

namespace chac::hierarchy {

struct LayerRecord {
  // Every transition this layer emitted, in execution order. Each call of
  // RunLayer contributes one contiguous run.
  std::vector<hindsight::Transition> transitions;
  std::vector<std::size_t> run_starts;
  // Layer > 0: for each transition, the index of the run it spawned in the
  // layer below.
  std::vector<std::size_t> child_run;
  std::vector<Vec> subgoals;  // layer > 0: proposed subgoals in order

  std::size_t num_runs() const { return run_starts.size(); }
  std::span<const hindsight::Transition> run(std::size_t r) const;
};

struct PrimitiveStep {
  Vec state;
  Vec action;
  double reward = -1.0;  // against the environment goal
  bool achieved = false;
};

struct RolloutRecord {
  std::vector<LayerRecord> layers;
  std::vector<PrimitiveStep> steps;
  Vec initial_state;
  Vec goal;
  Vec final_state;
  bool success = false;
};

struct LayerOutcome {
  Vec final_state;
  bool achieved = false;
  int transitions = 0;
};

// Executes the nested layer recursion for one episode.
class Rollout {
 public:
  // `explore` enables exploration noise and subgoal testing.
  Rollout(envs::GoalEnv& env, const Agent& agent, bool explore, Rng& rng);

  // Up to H attempts of layer i toward `goal`. Above layer 0 every attempt
  // hands its action as a subgoal to layer i - 1. Stops early when this goal
  // or any enclosing goal is achieved, or the environment step cap is hit.
  LayerOutcome RunLayer(int i, const Vec& state, const Vec& goal,
                        bool test_mode);

  RolloutRecord& record() { return record_; }

 private:
  bool EnclosingGoalAchieved(int i, const Vec& state) const;

  envs::GoalEnv& env_;
  const Agent& agent_;
  bool explore_;
  Rng& rng_;
  std::vector<Vec> goal_stack_;
  RolloutRecord record_;
};

// Resets `env` with `env_seed` and lets the top layer pursue the
// environment goal.
RolloutRecord RunEpisode(envs::GoalEnv& env, const Agent& agent,
                         std::uint64_t env_seed, bool explore, Rng& rng);

}  // namespace chac::hierarchy
