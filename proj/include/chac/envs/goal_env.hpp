#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "chac/common.hpp"

namespace chac::envs {

struct EnvSpec {
  std::string name;
  int state_dim = 0;
  int action_dim = 0;
  int goal_dim = 0;
  std::vector<Bounds> action_bounds;  // primitive actions
  std::vector<Bounds> goal_bounds;    // reachable goal space; subgoal range
  std::vector<Bounds> state_bounds;   // nominal ranges, used to scale inputs
  Vec goal_thresholds;
  int max_episode_steps = 0;
};

struct ResetResult {
  Vec state;
  Vec goal;
};

struct StepResult {
  Vec next_state;
  double extrinsic_reward = -1.0;  // exactly -1 or 0
  bool achieved = false;
};

// True iff |projected_d - goal_d| <= threshold_d for every dimension.
bool GoalAchieved(const Vec& projected, const Vec& goal, const Vec& thresholds);

// Deterministic goal-conditioned environment with sparse reward.
class GoalEnv {
 public:
  explicit GoalEnv(EnvSpec spec);
  virtual ~GoalEnv() = default;

  const EnvSpec& spec() const { return spec_; }

  // Starts a new episode; a pure function of `seed`.
  ResetResult Reset(std::uint64_t seed);

  // Clamps `action` into bounds and advances one step. Throws
  // ContractViolation before Reset or once max_episode_steps is reached.
  StepResult Step(const Vec& action);

  // Goal-relevant coordinates of a full state.
  virtual Vec ProjectToGoal(const Vec& state) const = 0;

  bool Achieved(const Vec& state, const Vec& goal) const;

  bool Done() const { return started_ && steps_ >= spec_.max_episode_steps; }
  int steps_taken() const { return steps_; }
  const Vec& state() const { return state_; }
  const Vec& goal() const { return goal_; }

  Vec ClampAction(const Vec& action) const;

  virtual std::unique_ptr<GoalEnv> Clone() const = 0;

 protected:
  virtual Vec InitialState(Rng& rng) const = 0;
  virtual Vec SampleGoal(Rng& rng) const = 0;
  // `action` is already clamped.
  virtual Vec Transition(const Vec& state, const Vec& action) const = 0;

 private:
  EnvSpec spec_;
  Vec state_;
  Vec goal_;
  int steps_ = 0;
  bool started_ = false;
};

// Environment registry keyed by name: PointReacher2D, FourRoomsPoint,
// ArmReacher3, CausalButton. Unknown names throw InvalidInput.
std::unique_ptr<GoalEnv> MakeEnv(std::string_view name);
std::vector<std::string> EnvNames();

// One CSV row per step: t, state..., action..., reward, achieved.
class TrajectoryWriter {
 public:
  TrajectoryWriter(std::ostream& out, const EnvSpec& spec);
  void Row(int t, const Vec& state, const Vec& action, double reward,
           bool achieved);

 private:
  std::ostream& out_;
  int state_dim_;
  int action_dim_;
};

}  // namespace chac::envs
