#include "chac/runner/trainer.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

#include "chac/hierarchy/rollout.hpp"

namespace chac::runner {

namespace {

std::string Real(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string Optional(const std::optional<double>& x) {
  return x ? Real(*x) : std::string();
}

}  // namespace

std::string EtaTag(double eta) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", eta);
  return buf;
}

std::string MetricsHeader(int num_layers) {
  std::string h = "seed,episode,success_rate";
  for (int i = 0; i < num_layers; ++i) {
    const std::string s = std::to_string(i);
    h += ",critic_loss_" + s + ",actor_objective_" + s + ",forward_loss_" + s +
         ",raw_curiosity_mean_" + s + ",curiosity_min_" + s +
         ",curiosity_max_" + s;
  }
  return h;
}

std::string FormatMetricsRow(const MetricsRow& row) {
  std::string line = std::to_string(row.seed) + "," +
                     std::to_string(row.episode) + "," + Real(row.success_rate);
  for (const auto& l : row.layers) {
    line += "," + Real(l.critic_loss) + "," + Real(l.actor_objective) + "," +
            Optional(l.forward_loss) + "," + Optional(l.raw_curiosity_mean) +
            "," + Optional(l.curiosity_min) + "," + Optional(l.curiosity_max);
  }
  return line;
}

double EvaluateAgent(const hierarchy::Agent& agent, envs::GoalEnv& env,
                     int episodes, std::uint64_t seed) {
  if (episodes <= 0) throw InvalidInput("evaluation needs at least one episode");
  Rng seeds(seed);
  Rng unused(0);
  int successes = 0;
  for (int e = 0; e < episodes; ++e) {
    const auto record =
        hierarchy::RunEpisode(env, agent, seeds(), /*explore=*/false, unused);
    successes += record.success ? 1 : 0;
  }
  return static_cast<double>(successes) / episodes;
}

TrainResult TrainSeed(const RunConfig& config, double eta, std::uint64_t seed,
                      const TrainOptions& options) {
  config.Validate();
  auto env = envs::MakeEnv(config.env);
  hierarchy::AgentConfig agent_config = config.agent;
  agent_config.eta = eta;

  // All randomness derives from this one engine, in a fixed draw order.
  Rng root(seed);
  hierarchy::Agent agent(env->spec(), agent_config, root);
  Rng explore_rng(root());
  Rng sample_rng(root());
  Rng train_env_seeds(root());
  const std::uint64_t test_seed_base = root();

  const int k = agent.num_layers();
  const bool curious = agent_config.curiosity_enabled;

  if (options.metrics != nullptr) *options.metrics << MetricsHeader(k) << '\n';

  TrainResult result;
  std::vector<hierarchy::LayerRoundStats> acc(static_cast<std::size_t>(k));
  std::vector<int> acc_rounds(static_cast<std::size_t>(k), 0);
  std::vector<double> fw_sum(static_cast<std::size_t>(k), 0.0);
  std::vector<int> fw_rounds(static_cast<std::size_t>(k), 0);
  std::vector<double> raw_sum(static_cast<std::size_t>(k), 0.0);
  std::vector<std::size_t> raw_count(static_cast<std::size_t>(k), 0);
  int test_index = 0;

  for (int episode = 1; episode <= config.episodes; ++episode) {
    const auto record = hierarchy::RunEpisode(*env, agent, train_env_seeds(),
                                              /*explore=*/true, explore_rng);
    const auto store = agent.Store(record, *env);
    const auto round = agent.TrainRound(sample_rng);
    for (std::size_t i = 0; i < static_cast<std::size_t>(k); ++i) {
      raw_sum[i] += store[i].raw_curiosity_sum;
      raw_count[i] += store[i].raw_curiosity_count;
      if (round[i].skipped > 0) {
        result.numeric_incidents += round[i].skipped;
        if (options.log != nullptr) {
          *options.log << "seed " << seed << " episode " << episode
                       << " layer " << i << ": skipped " << round[i].skipped
                       << " non-finite update(s)\n";
        }
      }
      if (round[i].batches > 0) {
        acc[i].critic_loss += round[i].critic_loss;
        acc[i].actor_objective += round[i].actor_objective;
        ++acc_rounds[i];
      }
      if (std::isfinite(round[i].forward_loss)) {
        fw_sum[i] += round[i].forward_loss;
        ++fw_rounds[i];
      }
    }
    if (options.on_episode) options.on_episode(episode, agent);

    if (episode % config.test_every != 0) continue;

    MetricsRow row;
    row.seed = seed;
    row.episode = episode;
    row.success_rate = EvaluateAgent(agent, *env, config.test_batch_size,
                                     test_seed_base + static_cast<std::uint64_t>(test_index++));
    for (std::size_t i = 0; i < static_cast<std::size_t>(k); ++i) {
      LayerMetrics m;
      if (acc_rounds[i] > 0) {
        m.critic_loss = acc[i].critic_loss / acc_rounds[i];
        m.actor_objective = acc[i].actor_objective / acc_rounds[i];
      }
      if (curious) {
        const auto& norm = agent.layer(static_cast<int>(i)).normalizer;
        m.forward_loss = fw_rounds[i] > 0 ? fw_sum[i] / fw_rounds[i] : 0.0;
        m.raw_curiosity_mean =
            raw_count[i] > 0 ? raw_sum[i] / static_cast<double>(raw_count[i]) : 0.0;
        m.curiosity_min = norm.min();
        m.curiosity_max = norm.max();
      }
      row.layers.push_back(m);
      acc[i] = {};
      acc_rounds[i] = 0;
      fw_sum[i] = 0.0;
      fw_rounds[i] = 0;
      raw_sum[i] = 0.0;
      raw_count[i] = 0;
    }
    if (options.metrics != nullptr) {
      *options.metrics << FormatMetricsRow(row) << '\n';
      options.metrics->flush();
    }
    result.rows.push_back(std::move(row));
  }

  if (options.checkpoint_dir) {
    agent.Save(*options.checkpoint_dir);
    RunConfig echo = config;
    echo.etas = {eta};
    echo.seeds = {seed};
    std::ofstream cfg(*options.checkpoint_dir / "config.txt");
    cfg << FormatConfig(echo);
  }
  return result;
}

std::vector<std::filesystem::path> Train(const RunConfig& config,
                                         std::ostream* log) {
  config.Validate();
  std::filesystem::create_directories(config.output_dir);
  std::vector<std::filesystem::path> files;
  for (double eta : config.etas) {
    for (std::uint64_t seed : config.seeds) {
      const std::string tag = "eta" + EtaTag(eta) + "_seed" + std::to_string(seed);
      const auto path = config.output_dir / ("metrics_" + tag + ".csv");
      std::ofstream out(path);
      if (!out) throw InvalidInput("cannot write " + path.string());
      TrainOptions opts;
      opts.metrics = &out;
      opts.log = log;
      if (config.save_checkpoints) opts.checkpoint_dir = config.output_dir / tag;
      TrainSeed(config, eta, seed, opts);
      files.push_back(path);
    }
  }
  return files;
}

double Evaluate(const std::filesystem::path& checkpoint_dir, int episodes,
                std::uint64_t seed) {
  if (episodes <= 0) throw InvalidInput("evaluation needs at least one episode");
  const RunConfig config = LoadConfig(checkpoint_dir / "config.txt");
  auto env = envs::MakeEnv(config.env);
  hierarchy::AgentConfig agent_config = config.agent;
  agent_config.eta = config.etas.front();
  Rng init(0);
  hierarchy::Agent agent(env->spec(), agent_config, init);
  agent.Load(checkpoint_dir);
  return EvaluateAgent(agent, *env, episodes, seed);
}

}  // namespace chac::runner
