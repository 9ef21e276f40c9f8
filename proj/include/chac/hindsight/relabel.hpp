#pragma once

#include <optional>
#include <span>
#include <vector>

#include "chac/envs/goal_env.hpp"
#include "chac/hindsight/transition.hpp"

namespace chac::hindsight {

// Copies of `rollout` (one layer, one run of that layer, in order) whose
// goal is the projection of the final next_state. Extrinsic reward and
// `achieved` are recomputed under the new goal and `reward` is reset to the
// extrinsic value; curiosity fields are carried over for re-mixing.
std::vector<Transition> HindsightGoalTransitions(
    std::span<const Transition> rollout, const envs::GoalEnv& env);

// Copy of a layer > 0 transition pretending the proposed subgoal was the
// state the lower layer actually reached. Reward and `achieved` are
// recomputed against t.goal. Throws ContractViolation at layer 0.
Transition HindsightActionTransition(const Transition& t,
                                     const Vec& achieved_state,
                                     const envs::GoalEnv& env);

// Penalty for a tested subgoal that was missed: reward -horizon, terminal.
// std::nullopt when the subgoal was reached. Throws ContractViolation when
// `t` was not executed in test mode or sits at layer 0.
std::optional<Transition> SubgoalTestTransition(const Transition& t,
                                                bool subgoal_achieved,
                                                int horizon);

}  // namespace chac::hindsight
