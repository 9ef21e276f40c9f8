#include "chac/hindsight/relabel.hpp"

namespace chac::hindsight {

namespace {

void Rescore(Transition& t, const Vec& reached, const envs::GoalEnv& env) {
  t.achieved = env.Achieved(reached, t.goal);
  t.extrinsic_reward = t.achieved ? 0.0 : -1.0;
  t.reward = t.extrinsic_reward;
}

}  // namespace

std::vector<Transition> HindsightGoalTransitions(
    std::span<const Transition> rollout, const envs::GoalEnv& env) {
  std::vector<Transition> out;
  if (rollout.empty()) return out;
  const Vec new_goal = env.ProjectToGoal(rollout.back().next_state);
  out.reserve(rollout.size());
  for (const Transition& src : rollout) {
    Transition t = src;
    t.goal = new_goal;
    t.is_subgoal_test = false;
    Rescore(t, t.next_state, env);
    out.push_back(std::move(t));
  }
  return out;
}

Transition HindsightActionTransition(const Transition& t,
                                     const Vec& achieved_state,
                                     const envs::GoalEnv& env) {
  if (t.layer <= 0) {
    throw ContractViolation("hindsight action transitions need layer > 0");
  }
  Transition h = t;
  h.action = env.ProjectToGoal(achieved_state);
  h.subgoal_reached = true;
  Rescore(h, achieved_state, env);
  return h;
}

std::optional<Transition> SubgoalTestTransition(const Transition& t,
                                                bool subgoal_achieved,
                                                int horizon) {
  if (t.layer <= 0) {
    throw ContractViolation("subgoal testing applies to layer > 0 only");
  }
  if (!t.test_mode) {
    throw ContractViolation("subgoal penalty requested for a non-test attempt");
  }
  if (subgoal_achieved) return std::nullopt;
  Transition p = t;
  p.extrinsic_reward = -static_cast<double>(horizon);
  p.reward = p.extrinsic_reward;
  p.achieved = false;
  p.is_subgoal_test = true;
  return p;
}

}  // namespace chac::hindsight
