#include "chac/numeric/serialize.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

namespace chac::numeric {

namespace {

constexpr std::array<char, 8> kMlpMagic = {'C', 'H', 'A', 'C', 'M', 'L', 'P', '1'};
constexpr std::array<char, 8> kAdamMagic = {'C', 'H', 'A', 'C', 'A', 'D', 'M', '1'};
constexpr std::uint32_t kMaxDim = 1u << 20;

template <typename U>
void PutLe(std::ostream& out, U value) {
  std::array<char, sizeof(U)> bytes;
  for (std::size_t i = 0; i < sizeof(U); ++i) {
    bytes[i] = static_cast<char>((value >> (8 * i)) & 0xFF);
  }
  out.write(bytes.data(), bytes.size());
}

template <typename U>
U GetLe(std::istream& in) {
  std::array<unsigned char, sizeof(U)> bytes;
  in.read(reinterpret_cast<char*>(bytes.data()), bytes.size());
  if (!in) throw InvalidInput("snapshot truncated");
  U value = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) {
    value |= static_cast<U>(bytes[i]) << (8 * i);
  }
  return value;
}

void PutReal(std::ostream& out, double x) {
  PutLe(out, std::bit_cast<std::uint64_t>(x));
}

double GetReal(std::istream& in) {
  return std::bit_cast<double>(GetLe<std::uint64_t>(in));
}

void ExpectMagic(std::istream& in, const std::array<char, 8>& magic) {
  std::array<char, 8> got{};
  in.read(got.data(), got.size());
  if (!in || got != magic) throw InvalidInput("bad snapshot magic");
}

void WriteShapes(std::ostream& out, const std::vector<DenseLayer>& layers) {
  PutLe<std::uint32_t>(out, static_cast<std::uint32_t>(layers.size()));
  for (const auto& l : layers) {
    PutLe<std::uint32_t>(out, static_cast<std::uint32_t>(l.out_dim()));
    PutLe<std::uint32_t>(out, static_cast<std::uint32_t>(l.in_dim()));
  }
}

std::vector<DenseLayer> ReadShapes(std::istream& in) {
  const auto count = GetLe<std::uint32_t>(in);
  if (count == 0 || count > 1024) throw InvalidInput("bad layer count");
  std::vector<DenseLayer> layers(count);
  for (auto& l : layers) {
    const auto out = GetLe<std::uint32_t>(in);
    const auto in_dim = GetLe<std::uint32_t>(in);
    if (out == 0 || in_dim == 0 || out > kMaxDim || in_dim > kMaxDim) {
      throw InvalidInput("bad layer shape");
    }
    l.weight.resize(out, in_dim);
    l.bias.resize(out);
  }
  return layers;
}

void WriteBody(std::ostream& out, const std::vector<DenseLayer>& layers) {
  for (const auto& l : layers) {
    for (Eigen::Index r = 0; r < l.weight.rows(); ++r) {
      for (Eigen::Index c = 0; c < l.weight.cols(); ++c) PutReal(out, l.weight(r, c));
    }
    for (Eigen::Index r = 0; r < l.bias.size(); ++r) PutReal(out, l.bias(r));
  }
}

void ReadBody(std::istream& in, std::vector<DenseLayer>& layers) {
  for (auto& l : layers) {
    for (Eigen::Index r = 0; r < l.weight.rows(); ++r) {
      for (Eigen::Index c = 0; c < l.weight.cols(); ++c) l.weight(r, c) = GetReal(in);
    }
    for (Eigen::Index r = 0; r < l.bias.size(); ++r) l.bias(r) = GetReal(in);
  }
}

}  // namespace

void WriteMlp(std::ostream& out, const MlpParameters& params) {
  params.Validate();
  out.write(kMlpMagic.data(), kMlpMagic.size());
  PutLe<std::uint32_t>(out, static_cast<std::uint32_t>(params.output_activation));
  WriteShapes(out, params.layers);
  WriteBody(out, params.layers);
}

MlpParameters ReadMlp(std::istream& in) {
  ExpectMagic(in, kMlpMagic);
  MlpParameters p;
  const auto act = GetLe<std::uint32_t>(in);
  if (act > static_cast<std::uint32_t>(OutputActivation::kTanh)) {
    throw InvalidInput("unknown output activation");
  }
  p.output_activation = static_cast<OutputActivation>(act);
  p.layers = ReadShapes(in);
  ReadBody(in, p.layers);
  p.Validate();
  return p;
}

void WriteAdam(std::ostream& out, const AdamState& state) {
  out.write(kAdamMagic.data(), kAdamMagic.size());
  PutLe<std::uint64_t>(out, state.step_count);
  PutReal(out, state.beta1);
  PutReal(out, state.beta2);
  PutReal(out, state.epsilon);
  WriteShapes(out, state.first_moment);
  WriteBody(out, state.first_moment);
  WriteBody(out, state.second_moment);
}

AdamState ReadAdam(std::istream& in) {
  ExpectMagic(in, kAdamMagic);
  AdamState s;
  s.step_count = GetLe<std::uint64_t>(in);
  s.beta1 = GetReal(in);
  s.beta2 = GetReal(in);
  s.epsilon = GetReal(in);
  s.first_moment = ReadShapes(in);
  s.second_moment = s.first_moment;
  ReadBody(in, s.first_moment);
  ReadBody(in, s.second_moment);
  return s;
}

void SaveMlp(const std::filesystem::path& path, const MlpParameters& params) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot open " + path.string() + " for writing");
  WriteMlp(out, params);
}

MlpParameters LoadMlp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open " + path.string());
  return ReadMlp(in);
}

void SaveAdam(const std::filesystem::path& path, const AdamState& state) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot open " + path.string() + " for writing");
  WriteAdam(out, state);
}

AdamState LoadAdam(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open " + path.string());
  return ReadAdam(in);
}

}  // namespace chac::numeric
