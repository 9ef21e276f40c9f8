#pragma once

#include <limits>

#include "chac/common.hpp"

namespace chac::hindsight {

// One layer-local experience tuple; the unit of replay.
struct Transition {
  int layer = 0;
  Vec state;
  Vec action;  // primitive action at layer 0, subgoal above
  Vec next_state;
  Vec goal;

  // -1 or 0 from the goal predicate; -H on subgoal-testing penalties.
  double extrinsic_reward = -1.0;
  // Reward the critic trains on: the extrinsic reward mixed with curiosity.
  double reward = -1.0;
  // Forward-model error for (state, action, next_state) and its normalized
  // value in [-1, 0]; NaN when curiosity is not computed.
  double raw_curiosity = std::numeric_limits<double>::quiet_NaN();
  double curiosity_reward = std::numeric_limits<double>::quiet_NaN();

  bool achieved = false;         // next_state satisfies goal
  bool is_subgoal_test = false;  // penalty transition
  bool test_mode = false;        // executed without noise below this layer
  bool explored = false;         // action was noise-perturbed
  bool subgoal_reached = false;  // layer > 0: lower layer reached `action`

  // Penalties and achieved transitions do not bootstrap.
  bool terminal() const { return achieved || is_subgoal_test; }
};

}  // namespace chac::hindsight
