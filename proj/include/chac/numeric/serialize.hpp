#pragma once

#include <filesystem>
#include <iosfwd>

#include "chac/numeric/adam.hpp"
#include "chac/numeric/mlp.hpp"

// Binary snapshot layout (all integers u32 little-endian unless noted, all
// reals IEEE-754 binary64 little-endian):
//
//   network:   "CHACMLP1" | output_activation | layer_count |
//              (out, in) per layer |
//              per layer: weight row-major (out*in reals), bias (out reals)
//
//   optimizer: "CHACADM1" | step_count (u64) | beta1 | beta2 | epsilon |
//              layer_count | (out, in) per layer |
//              first moments, then second moments, each laid out like the
//              network body above
namespace chac::numeric {

void WriteMlp(std::ostream& out, const MlpParameters& params);
MlpParameters ReadMlp(std::istream& in);

void WriteAdam(std::ostream& out, const AdamState& state);
AdamState ReadAdam(std::istream& in);

void SaveMlp(const std::filesystem::path& path, const MlpParameters& params);
MlpParameters LoadMlp(const std::filesystem::path& path);

void SaveAdam(const std::filesystem::path& path, const AdamState& state);
AdamState LoadAdam(const std::filesystem::path& path);

}  // namespace chac::numeric
