#include "chac/envs/goal_env.hpp"

#include <cmath>
#include <ostream>

#include "chac/envs/environments.hpp"

namespace chac::envs {

bool GoalAchieved(const Vec& projected, const Vec& goal, const Vec& thresholds) {
  if (projected.size() != goal.size() || goal.size() != thresholds.size()) {
    throw InvalidInput("goal predicate: dimension mismatch");
  }
  for (Eigen::Index d = 0; d < goal.size(); ++d) {
    if (!(std::abs(projected(d) - goal(d)) <= thresholds(d))) return false;
  }
  return true;
}

GoalEnv::GoalEnv(EnvSpec spec) : spec_(std::move(spec)) {
  if (spec_.state_dim <= 0 || spec_.action_dim <= 0 || spec_.goal_dim <= 0 ||
      static_cast<int>(spec_.action_bounds.size()) != spec_.action_dim ||
      static_cast<int>(spec_.goal_bounds.size()) != spec_.goal_dim ||
      static_cast<int>(spec_.state_bounds.size()) != spec_.state_dim ||
      spec_.goal_thresholds.size() != spec_.goal_dim ||
      spec_.max_episode_steps <= 0) {
    throw InvalidInput("inconsistent environment spec for " + spec_.name);
  }
}

ResetResult GoalEnv::Reset(std::uint64_t seed) {
  Rng rng(seed);
  state_ = InitialState(rng);
  goal_ = SampleGoal(rng);
  steps_ = 0;
  started_ = true;
  return {state_, goal_};
}

Vec GoalEnv::ClampAction(const Vec& action) const {
  if (action.size() != spec_.action_dim) {
    throw InvalidInput("action has wrong dimension");
  }
  Vec a(action.size());
  for (Eigen::Index d = 0; d < action.size(); ++d) {
    // NaN maps to the interval center
    a(d) = std::isnan(action(d)) ? spec_.action_bounds[d].center()
                                 : spec_.action_bounds[d].clamp(action(d));
  }
  return a;
}

StepResult GoalEnv::Step(const Vec& action) {
  if (!started_) throw ContractViolation(spec_.name + ": step before reset");
  if (Done()) throw ContractViolation(spec_.name + ": step after episode end");
  state_ = Transition(state_, ClampAction(action));
  ++steps_;
  StepResult r;
  r.next_state = state_;
  r.achieved = Achieved(state_, goal_);
  r.extrinsic_reward = r.achieved ? 0.0 : -1.0;
  return r;
}

bool GoalEnv::Achieved(const Vec& state, const Vec& goal) const {
  return GoalAchieved(ProjectToGoal(state), goal, spec_.goal_thresholds);
}

std::unique_ptr<GoalEnv> MakeEnv(std::string_view name) {
  if (name == "PointReacher2D") return std::make_unique<PointReacher2D>();
  if (name == "FourRoomsPoint") return std::make_unique<FourRoomsPoint>();
  if (name == "ArmReacher3") return std::make_unique<ArmReacher3>();
  if (name == "CausalButton") return std::make_unique<CausalButton>();
  throw InvalidInput("unknown environment: " + std::string(name));
}

std::vector<std::string> EnvNames() {
  return {"PointReacher2D", "FourRoomsPoint", "ArmReacher3", "CausalButton"};
}

TrajectoryWriter::TrajectoryWriter(std::ostream& out, const EnvSpec& spec)
    : out_(out), state_dim_(spec.state_dim), action_dim_(spec.action_dim) {
  out_ << "t";
  for (int d = 0; d < state_dim_; ++d) out_ << ",s" << d;
  for (int d = 0; d < action_dim_; ++d) out_ << ",a" << d;
  out_ << ",reward,achieved\n";
}

void TrajectoryWriter::Row(int t, const Vec& state, const Vec& action,
                           double reward, bool achieved) {
  if (state.size() != state_dim_ || action.size() != action_dim_) {
    throw InvalidInput("trajectory row has wrong dimensions");
  }
  const auto old_precision = out_.precision(17);
  out_ << t;
  for (int d = 0; d < state_dim_; ++d) out_ << ',' << state(d);
  for (int d = 0; d < action_dim_; ++d) out_ << ',' << action(d);
  out_ << ',' << reward << ',' << (achieved ? 1 : 0) << '\n';
  out_.precision(old_precision);
}

}  // namespace chac::envs
