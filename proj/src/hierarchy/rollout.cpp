#include "chac/hierarchy/rollout.hpp"

namespace chac::hierarchy {

using hindsight::Transition;

std::span<const Transition> LayerRecord::run(std::size_t r) const {
  const std::size_t begin = run_starts.at(r);
  const std::size_t end =
      r + 1 < run_starts.size() ? run_starts[r + 1] : transitions.size();
  return std::span<const Transition>(transitions).subspan(begin, end - begin);
}

Rollout::Rollout(envs::GoalEnv& env, const Agent& agent, bool explore, Rng& rng)
    : env_(env), agent_(agent), explore_(explore), rng_(rng) {
  const auto k = static_cast<std::size_t>(agent.num_layers());
  goal_stack_.resize(k);
  record_.layers.resize(k);
}

bool Rollout::EnclosingGoalAchieved(int i, const Vec& state) const {
  for (int j = i + 1; j < agent_.num_layers(); ++j) {
    const Vec& g = goal_stack_[static_cast<std::size_t>(j)];
    if (g.size() > 0 && env_.Achieved(state, g)) return true;
  }
  return false;
}

LayerOutcome Rollout::RunLayer(int i, const Vec& state, const Vec& goal,
                               bool test_mode) {
  if (i < 0 || i >= agent_.num_layers()) {
    throw InvalidInput("layer index out of range");
  }
  const auto idx = static_cast<std::size_t>(i);
  const auto& config = agent_.config().hierarchy;
  const auto& ac = agent_.layer(i).actor_critic;
  const policy::NoiseSpec noise = config.NoiseFor(i);
  std::bernoulli_distribution test_draw(config.subgoal_test_rate);

  goal_stack_[idx] = goal;
  LayerRecord& rec = record_.layers[idx];
  const std::size_t run_start = rec.transitions.size();

  LayerOutcome out;
  out.final_state = state;
  for (int attempt = 0; attempt < config.horizon && !env_.Done(); ++attempt) {
    Transition t;
    t.layer = i;
    t.state = out.final_state;
    t.goal = goal;
    t.test_mode = test_mode;
    if (explore_ && !test_mode) {
      t.action = ac.Act(t.state, goal, noise, rng_, &t.explored);
    } else {
      t.action = ac.Act(t.state, goal);
    }

    if (i > 0) {
      const bool child_test =
          test_mode || (explore_ && config.subgoal_test_rate > 0.0 &&
                        test_draw(rng_));
      t.test_mode = child_test;
      rec.subgoals.push_back(t.action);
      const std::size_t child_runs_before =
          record_.layers[idx - 1].run_starts.size();
      const LayerOutcome child = RunLayer(i - 1, t.state, t.action, child_test);
      t.next_state = child.final_state;
      t.subgoal_reached = env_.Achieved(t.next_state, t.action);
      rec.child_run.push_back(child_runs_before);
    } else {
      PrimitiveStep step;
      step.state = t.state;
      step.action = env_.ClampAction(t.action);
      const envs::StepResult r = env_.Step(t.action);
      step.reward = r.extrinsic_reward;
      step.achieved = r.achieved;
      record_.steps.push_back(std::move(step));
      t.next_state = r.next_state;
    }

    t.achieved = env_.Achieved(t.next_state, goal);
    t.extrinsic_reward = t.achieved ? 0.0 : -1.0;
    t.reward = t.extrinsic_reward;
    out.final_state = t.next_state;
    rec.transitions.push_back(std::move(t));
    ++out.transitions;

    if (rec.transitions.back().achieved) {
      out.achieved = true;
      break;
    }
    if (EnclosingGoalAchieved(i, out.final_state)) break;
  }
  if (out.transitions > 0) rec.run_starts.push_back(run_start);
  goal_stack_[idx] = Vec();
  return out;
}

RolloutRecord RunEpisode(envs::GoalEnv& env, const Agent& agent,
                         std::uint64_t env_seed, bool explore, Rng& rng) {
  const envs::ResetResult start = env.Reset(env_seed);
  Rollout rollout(env, agent, explore, rng);
  const LayerOutcome top =
      rollout.RunLayer(agent.num_layers() - 1, start.state, start.goal, false);
  RolloutRecord record = std::move(rollout.record());
  record.initial_state = start.state;
  record.goal = start.goal;
  record.final_state = top.final_state;
  record.success = env.Achieved(top.final_state, start.goal);
  return record;
}

}  // namespace chac::hierarchy
