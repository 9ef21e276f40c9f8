#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "chac/runner/config.hpp"

namespace chac::runner {

struct LayerMetrics {
  double critic_loss = 0.0;
  double actor_objective = 0.0;
  // Absent when curiosity is disabled.
  std::optional<double> forward_loss;
  std::optional<double> raw_curiosity_mean;
  std::optional<double> curiosity_min;
  std::optional<double> curiosity_max;
};

struct MetricsRow {
  std::uint64_t seed = 0;
  int episode = 0;  // training episodes completed
  double success_rate = 0.0;
  std::vector<LayerMetrics> layers;
};

// Header and rows in MetricsRow field order; reals printed with 17
// significant digits so equal values give equal bytes.
std::string MetricsHeader(int num_layers);
std::string FormatMetricsRow(const MetricsRow& row);

struct TrainOptions {
  std::ostream* metrics = nullptr;          // CSV sink, header included
  std::optional<std::filesystem::path> checkpoint_dir;
  std::ostream* log = nullptr;              // numeric incidents
  // Called after each stored training episode (buffer audits in tests).
  std::function<void(int episode, const hierarchy::Agent&)> on_episode;
};

struct TrainResult {
  std::vector<MetricsRow> rows;
  int numeric_incidents = 0;
};

// One seed of one eta: alternates `test_every` exploratory episodes (stored
// and learned from, one update round each) with a noiseless test batch of
// `test_batch_size` episodes that yields one metrics row.
TrainResult TrainSeed(const RunConfig& config, double eta, std::uint64_t seed,
                      const TrainOptions& options = {});

// Every (eta, seed) pair of `config`; writes
//   <output_dir>/metrics_eta<eta>_seed<seed>.csv
// and, if enabled, checkpoints under <output_dir>/eta<eta>_seed<seed>/.
// Returns the metrics file paths.
std::vector<std::filesystem::path> Train(const RunConfig& config,
                                         std::ostream* log = nullptr);

// Noiseless episodes of a saved agent; fraction that reach the goal. The
// checkpoint directory holds config.txt plus the layer snapshots.
double Evaluate(const std::filesystem::path& checkpoint_dir, int episodes,
                std::uint64_t seed = 0);

// Same, for an in-memory agent.
double EvaluateAgent(const hierarchy::Agent& agent, envs::GoalEnv& env,
                     int episodes, std::uint64_t seed);

std::string EtaTag(double eta);

}  // namespace chac::runner
