#include <gtest/gtest.h>

#include <cmath>
#include <cstring>

#include "chac/envs/environments.hpp"
#include "chac/hierarchy/agent.hpp"
#include "chac/hierarchy/rollout.hpp"

namespace chac::hierarchy {
namespace {

using hindsight::Transition;

AgentConfig SmallConfig(int layers, int horizon) {
  AgentConfig c;
  c.hierarchy.num_layers = layers;
  c.hierarchy.horizon = horizon;
  c.actor_critic.hidden = {16, 16};
  c.forward_model.hidden = {16, 16};
  c.batch_size = 32;
  c.updates_per_round = 2;
  return c;
}

bool SameTransition(const Transition& a, const Transition& b) {
  return a.state == b.state && a.action == b.action &&
         a.next_state == b.next_state && a.goal == b.goal &&
         a.reward == b.reward && a.achieved == b.achieved &&
         a.test_mode == b.test_mode && a.explored == b.explored;
}

TEST(Config, Validation) {
  AgentConfig c = SmallConfig(2, 10);
  EXPECT_NO_THROW(c.Validate());
  c.hierarchy.num_layers = 0;
  EXPECT_THROW(c.Validate(), InvalidInput);
  c = SmallConfig(2, 10);
  c.eta = 1.5;
  EXPECT_THROW(c.Validate(), InvalidInput);
  c = SmallConfig(2, 10);
  c.hierarchy.gamma = {0.9, 0.9, 0.9};
  EXPECT_THROW(c.Validate(), InvalidInput);
  c = SmallConfig(2, 10);
  c.forward_updates_per_round = 3;
  EXPECT_THROW(c.Validate(), InvalidInput);
  c = SmallConfig(2, 10);
  c.hierarchy.subgoal_test_rate = -0.1;
  EXPECT_THROW(c.Validate(), InvalidInput);
}

TEST(Umdps, UpperLayersActInGoalSpace) {
  envs::CausalButton env;
  HierarchyConfig h;
  h.num_layers = 3;
  const auto u = BuildLayerUmdps(env.spec(), h);
  ASSERT_EQ(u.size(), 3u);
  EXPECT_EQ(u[0].action_dim, 2);
  EXPECT_EQ(u[1].action_dim, 3);
  EXPECT_EQ(u[2].action_dim, 3);
  EXPECT_EQ(u[1].state_dim, 5);
  EXPECT_EQ(u[2].action_bounds[2].hi, 1.0);
  EXPECT_EQ(u[0].gamma, 0.98);
}

TEST(Rollout, FlatAgentTakesAtMostHSteps) {
  envs::PointReacher2D env;
  Rng init(1);
  Agent agent(env.spec(), SmallConfig(1, 10), init);
  Rng rng(2);
  for (std::uint64_t e = 0; e < 20; ++e) {
    const auto rec = RunEpisode(env, agent, e, true, rng);
    EXPECT_LE(rec.steps.size(), 10u);
    EXPECT_EQ(rec.layers[0].transitions.size(), rec.steps.size());
    EXPECT_EQ(rec.layers[0].num_runs(), 1u);
  }
}

TEST(Rollout, TwoLayersBoundedByHSquared) {
  envs::PointReacher2D env;
  Rng init(1);
  Agent agent(env.spec(), SmallConfig(2, 5), init);
  Rng rng(2);
  for (std::uint64_t e = 0; e < 20; ++e) {
    const auto rec = RunEpisode(env, agent, e, true, rng);
    EXPECT_LE(rec.steps.size(), 25u);
    EXPECT_LE(rec.layers[1].transitions.size(), 5u);
    EXPECT_EQ(rec.layers[1].child_run.size(), rec.layers[1].transitions.size());
    EXPECT_EQ(rec.layers[0].num_runs(), rec.layers[1].transitions.size());
    EXPECT_EQ(rec.layers[1].subgoals.size(), rec.layers[1].transitions.size());
  }
}

TEST(Rollout, EpisodeCapStopsDeepHierarchy) {
  envs::PointReacher2D env;  // 50 steps
  Rng init(1);
  Agent agent(env.spec(), SmallConfig(3, 10), init);
  Rng rng(2);
  const auto rec = RunEpisode(env, agent, 0, true, rng);
  EXPECT_LE(rec.steps.size(), 50u);
}

TEST(Rollout, LayerLinksAreConsistent) {
  envs::FourRoomsPoint env;
  Rng init(3);
  Agent agent(env.spec(), SmallConfig(2, 6), init);
  Rng rng(4);
  for (std::uint64_t e = 0; e < 10; ++e) {
    const auto rec = RunEpisode(env, agent, e, true, rng);
    const auto& top = rec.layers[1];
    const auto& low = rec.layers[0];
    for (std::size_t j = 0; j < top.transitions.size(); ++j) {
      const auto run = low.run(top.child_run[j]);
      ASSERT_FALSE(run.empty());
      // the subgoal is the child's goal; the parent's next state is where the
      // child stopped
      EXPECT_TRUE(run.front().goal == top.subgoals[j]);
      EXPECT_TRUE(run.front().state == top.transitions[j].state);
      EXPECT_TRUE(run.back().next_state == top.transitions[j].next_state);
      EXPECT_EQ(top.transitions[j].subgoal_reached,
                env.Achieved(run.back().next_state, top.subgoals[j]));
      EXPECT_EQ(top.transitions[j].test_mode, run.front().test_mode);
    }
    if (!top.transitions.empty()) {
      EXPECT_TRUE(top.transitions.back().next_state == rec.final_state);
    }
  }
}

TEST(Rollout, TestModeSubtreesAreNoiseFree) {
  envs::PointReacher2D env;
  AgentConfig c = SmallConfig(2, 5);
  c.hierarchy.subgoal_test_rate = 0.5;
  Rng init(5);
  Agent agent(env.spec(), c, init);
  Rng rng(6);
  int tested = 0;
  for (std::uint64_t e = 0; e < 30; ++e) {
    const auto rec = RunEpisode(env, agent, e, true, rng);
    const auto& top = rec.layers[1];
    for (std::size_t j = 0; j < top.transitions.size(); ++j) {
      const auto run = rec.layers[0].run(top.child_run[j]);
      for (const auto& t : run) {
        EXPECT_EQ(t.test_mode, top.transitions[j].test_mode);
        if (t.test_mode) EXPECT_FALSE(t.explored);
      }
      tested += top.transitions[j].test_mode ? 1 : 0;
    }
  }
  EXPECT_GT(tested, 0);
}

TEST(Rollout, NoExplorationMeansNoNoiseOrTests) {
  envs::PointReacher2D env;
  Rng init(5);
  Agent agent(env.spec(), SmallConfig(2, 5), init);
  Rng rng(6);
  const auto rec = RunEpisode(env, agent, 3, false, rng);
  for (const auto& layer : rec.layers) {
    for (const auto& t : layer.transitions) {
      EXPECT_FALSE(t.explored);
      EXPECT_FALSE(t.test_mode);
    }
  }
}

TEST(Rollout, StopsWhenGoalAchieved) {
  // A goal that is already satisfied at the start state ends the episode
  // after the first primitive step whenever the step keeps it satisfied.
  envs::ArmReacher3 env;
  Rng init(1);
  AgentConfig c = SmallConfig(2, 10);
  Agent agent(env.spec(), c, init);
  for (auto& l : agent.layer(0).actor_critic.actor().layers) {
    l.weight.setZero();
    l.bias.setZero();
  }
  env.Reset(0);
  Rng rng(0);
  Rollout r(env, agent, false, rng);
  const Vec start = env.state();
  const Vec goal = env.ProjectToGoal(start);
  const auto out = r.RunLayer(1, start, goal, false);
  EXPECT_TRUE(out.achieved);
  EXPECT_EQ(out.transitions, 1);
  EXPECT_EQ(r.record().steps.size(), 1u);
}

TEST(Rollout, DeterministicGivenSeeds) {
  envs::FourRoomsPoint env;
  auto run = [&]() {
    Rng init(11);
    Agent agent(env.spec(), SmallConfig(2, 5), init);
    Rng rng(12);
    return RunEpisode(env, agent, 4, true, rng);
  };
  const auto a = run();
  const auto b = run();
  ASSERT_EQ(a.steps.size(), b.steps.size());
  for (int i = 0; i < 2; ++i) {
    ASSERT_EQ(a.layers[i].transitions.size(), b.layers[i].transitions.size());
    for (std::size_t j = 0; j < a.layers[i].transitions.size(); ++j) {
      EXPECT_TRUE(SameTransition(a.layers[i].transitions[j], b.layers[i].transitions[j]));
    }
  }
}

TEST(Agent, StoreBuildsExpectedReplay) {
  envs::PointReacher2D env;
  AgentConfig c = SmallConfig(2, 5);
  c.hierarchy.subgoal_test_rate = 0.5;
  Rng init(7);
  Agent agent(env.spec(), c, init);
  Rng rng(8);
  const auto rec = RunEpisode(env, agent, 1, true, rng);
  const auto stats = agent.Store(rec, env);

  // layer 0: originals + HG copies per run
  EXPECT_EQ(stats[0].stored, 2 * rec.layers[0].transitions.size());
  EXPECT_EQ(stats[0].penalties, 0u);
  // layer 1: HA + HG + penalties for missed tested subgoals
  std::size_t missed = 0;
  for (const auto& t : rec.layers[1].transitions) {
    missed += (t.test_mode && !t.subgoal_reached) ? 1 : 0;
  }
  EXPECT_EQ(stats[1].penalties, missed);
  EXPECT_EQ(stats[1].stored, 2 * rec.layers[1].transitions.size() + missed);
  EXPECT_EQ(agent.layer(1).buffer.size(), stats[1].stored);

  for (std::size_t i = 0; i < agent.layer(1).buffer.size(); ++i) {
    const Transition& t = agent.layer(1).buffer.at(i);
    if (t.is_subgoal_test) {
      EXPECT_EQ(t.reward, -5.0);
      EXPECT_TRUE(t.test_mode);
    } else {
      // hindsight action transitions: the subgoal is the reached state
      EXPECT_TRUE(t.action == env.ProjectToGoal(t.next_state));
      EXPECT_GE(t.reward, -1.0);
      EXPECT_LE(t.reward, 0.0);
    }
  }
}

TEST(Agent, EtaOneRewardsEqualExtrinsic) {
  envs::PointReacher2D env;
  AgentConfig c = SmallConfig(2, 5);
  c.eta = 1.0;
  Rng init(7);
  Agent agent(env.spec(), c, init);
  Rng rng(8);
  for (std::uint64_t e = 0; e < 5; ++e) agent.Store(RunEpisode(env, agent, e, true, rng), env);
  for (int l = 0; l < 2; ++l) {
    const auto& buf = agent.layer(l).buffer;
    for (std::size_t i = 0; i < buf.size(); ++i) {
      const Transition& t = buf.at(i);
      ASSERT_EQ(std::memcmp(&t.reward, &t.extrinsic_reward, sizeof(double)), 0);
      if (!t.is_subgoal_test) ASSERT_TRUE(std::isfinite(t.raw_curiosity));
    }
  }
}

TEST(Agent, CuriosityRewardsStayInBand) {
  envs::PointReacher2D env;
  AgentConfig c = SmallConfig(2, 5);
  c.eta = 0.3;
  Rng init(7);
  Agent agent(env.spec(), c, init);
  Rng rng(8);
  for (std::uint64_t e = 0; e < 5; ++e) agent.Store(RunEpisode(env, agent, e, true, rng), env);
  const auto& buf = agent.layer(0).buffer;
  for (std::size_t i = 0; i < buf.size(); ++i) {
    const Transition& t = buf.at(i);
    ASSERT_GE(t.curiosity_reward, -1.0);
    ASSERT_LE(t.curiosity_reward, 0.0);
    ASSERT_DOUBLE_EQ(t.reward, 0.3 * t.extrinsic_reward + 0.7 * t.curiosity_reward);
  }
}

TEST(Agent, TrainRoundRunsEveryLayer) {
  envs::PointReacher2D env;
  AgentConfig c = SmallConfig(2, 5);
  Rng init(7);
  Agent agent(env.spec(), c, init);
  Rng sample(1);
  const auto empty = agent.TrainRound(sample);
  EXPECT_EQ(empty[0].batches, 0);
  EXPECT_TRUE(std::isnan(empty[0].forward_loss));
  Rng rng(8);
  agent.Store(RunEpisode(env, agent, 0, true, rng), env);
  const auto stats = agent.TrainRound(sample);
  for (const auto& s : stats) {
    EXPECT_EQ(s.batches, 2);
    EXPECT_TRUE(std::isfinite(s.forward_loss));
    EXPECT_LE(s.critic_loss, 100.0);
  }
  EXPECT_EQ(agent.layer(0).actor_critic.critic_optimizer().step_count, 2u);
  EXPECT_EQ(agent.layer(0).forward_model->optimizer().step_count, 1u);
}

TEST(Agent, DisabledCuriosityHasNoModel) {
  envs::PointReacher2D env;
  AgentConfig c = SmallConfig(2, 5);
  c.curiosity_enabled = false;
  Rng init(7);
  Agent agent(env.spec(), c, init);
  EXPECT_FALSE(agent.layer(0).forward_model.has_value());
  Rng rng(8);
  agent.Store(RunEpisode(env, agent, 0, true, rng), env);
  const auto& t = agent.layer(0).buffer.at(0);
  EXPECT_TRUE(std::isnan(t.raw_curiosity));
  EXPECT_EQ(t.reward, t.extrinsic_reward);
}

}  // namespace
}  // namespace chac::hierarchy
