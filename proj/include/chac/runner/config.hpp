#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "chac/hierarchy/agent.hpp"

namespace chac::runner {

// Everything that determines a run. Parsed from flat `key = value` text with
// `#` comments; see FormatConfig for the full key list.
struct RunConfig {
  std::string env = "PointReacher2D";
  hierarchy::AgentConfig agent;  // agent.eta is overwritten per sweep entry
  std::vector<double> etas = {0.0, 0.25, 0.5, 0.75, 1.0};
  int episodes = 1000;
  int test_every = 10;
  int test_batch_size = 20;
  std::vector<std::uint64_t> seeds = {0, 1, 2, 3, 4};
  std::filesystem::path output_dir = "runs";
  bool save_checkpoints = true;

  void Validate() const;
};

// Throws InvalidInput naming the offending key (or line) on any error.
RunConfig ParseConfig(std::istream& in);
RunConfig ParseConfigString(const std::string& text);
RunConfig LoadConfig(const std::filesystem::path& path);

// Round-trips through ParseConfig.
std::string FormatConfig(const RunConfig& config);

}  // namespace chac::runner
