#include "chac/runner/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>

#include "chac/envs/goal_env.hpp"

namespace chac::runner {

namespace {

std::string Trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> SplitList(const std::string& value) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(value);
  while (std::getline(is, item, ',')) {
    item = Trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double ToReal(const std::string& key, const std::string& v) {
  double x = 0.0;
  const auto r = std::from_chars(v.data(), v.data() + v.size(), x);
  if (r.ec != std::errc() || r.ptr != v.data() + v.size()) {
    throw InvalidInput("config key '" + key + "': not a number: " + v);
  }
  return x;
}

long long ToInt(const std::string& key, const std::string& v) {
  long long x = 0;
  const auto r = std::from_chars(v.data(), v.data() + v.size(), x);
  if (r.ec != std::errc() || r.ptr != v.data() + v.size()) {
    throw InvalidInput("config key '" + key + "': not an integer: " + v);
  }
  return x;
}

std::uint64_t ToUnsigned(const std::string& key, const std::string& v) {
  std::uint64_t x = 0;
  const auto r = std::from_chars(v.data(), v.data() + v.size(), x);
  if (r.ec != std::errc() || r.ptr != v.data() + v.size()) {
    throw InvalidInput("config key '" + key + "': not a non-negative integer: " + v);
  }
  return x;
}

bool ToBool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "on" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "off" || v == "no") return false;
  throw InvalidInput("config key '" + key + "': not a boolean: " + v);
}

std::vector<double> ToReals(const std::string& key, const std::string& v) {
  std::vector<double> out;
  for (const auto& item : SplitList(v)) out.push_back(ToReal(key, item));
  if (out.empty()) throw InvalidInput("config key '" + key + "': empty list");
  return out;
}

std::vector<int> ToInts(const std::string& key, const std::string& v) {
  std::vector<int> out;
  for (const auto& item : SplitList(v)) {
    out.push_back(static_cast<int>(ToInt(key, item)));
  }
  if (out.empty()) throw InvalidInput("config key '" + key + "': empty list");
  return out;
}

std::string Real(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

template <typename T, typename F>
std::string Join(const std::vector<T>& xs, F fmt) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i > 0) s += ", ";
    s += fmt(xs[i]);
  }
  return s;
}

}  // namespace

void RunConfig::Validate() const {
  envs::MakeEnv(env);
  agent.Validate();
  if (etas.empty()) throw InvalidInput("config key 'eta': empty");
  for (double e : etas) {
    if (!(e >= 0.0 && e <= 1.0)) {
      throw InvalidInput("config key 'eta': values must lie in [0, 1]");
    }
  }
  if (episodes < 0) throw InvalidInput("config key 'episodes': must be >= 0");
  if (test_every < 1) throw InvalidInput("config key 'test_every': must be >= 1");
  if (test_batch_size < 1) {
    throw InvalidInput("config key 'test_batch_size': must be >= 1");
  }
  if (seeds.empty()) throw InvalidInput("config key 'seeds': must be non-empty");
}

RunConfig ParseConfig(std::istream& in) {
  RunConfig c;
  std::optional<std::vector<double>> eps;
  std::optional<std::vector<double>> sigma;

  using Setter = std::function<void(const std::string&, const std::string&)>;
  auto& h = c.agent.hierarchy;
  const std::map<std::string, Setter> setters = {
      {"env", [&](auto&, auto& v) { c.env = v; }},
      {"layers", [&](auto& k, auto& v) { h.num_layers = static_cast<int>(ToInt(k, v)); }},
      {"horizon", [&](auto& k, auto& v) { h.horizon = static_cast<int>(ToInt(k, v)); }},
      {"subgoal_test_rate", [&](auto& k, auto& v) { h.subgoal_test_rate = ToReal(k, v); }},
      {"gamma", [&](auto& k, auto& v) { h.gamma = ToReals(k, v); }},
      {"random_action_prob", [&](auto& k, auto& v) { eps = ToReals(k, v); }},
      {"sigma", [&](auto& k, auto& v) { sigma = ToReals(k, v); }},
      {"eta", [&](auto& k, auto& v) { c.etas = ToReals(k, v); }},
      {"lr",
       [&](auto& k, auto& v) {
         c.agent.actor_critic.learning_rate = ToReal(k, v);
         c.agent.forward_model.learning_rate = ToReal(k, v);
       }},
      {"batch_size",
       [&](auto& k, auto& v) { c.agent.batch_size = static_cast<std::size_t>(ToUnsigned(k, v)); }},
      {"buffer_capacity",
       [&](auto& k, auto& v) { c.agent.buffer_capacity = static_cast<std::size_t>(ToUnsigned(k, v)); }},
      {"normalizer_capacity",
       [&](auto& k, auto& v) {
         if (v == "unbounded") {
           c.agent.normalizer_capacity.reset();
         } else {
           c.agent.normalizer_capacity = static_cast<std::size_t>(ToUnsigned(k, v));
         }
       }},
      {"curiosity", [&](auto& k, auto& v) { c.agent.curiosity_enabled = ToBool(k, v); }},
      {"updates_per_round",
       [&](auto& k, auto& v) { c.agent.updates_per_round = static_cast<int>(ToInt(k, v)); }},
      {"forward_updates_per_round",
       [&](auto& k, auto& v) { c.agent.forward_updates_per_round = static_cast<int>(ToInt(k, v)); }},
      {"actor_critic_hidden", [&](auto& k, auto& v) { c.agent.actor_critic.hidden = ToInts(k, v); }},
      {"forward_model_hidden", [&](auto& k, auto& v) { c.agent.forward_model.hidden = ToInts(k, v); }},
      {"episodes", [&](auto& k, auto& v) { c.episodes = static_cast<int>(ToInt(k, v)); }},
      {"test_every", [&](auto& k, auto& v) { c.test_every = static_cast<int>(ToInt(k, v)); }},
      {"test_batch_size", [&](auto& k, auto& v) { c.test_batch_size = static_cast<int>(ToInt(k, v)); }},
      {"seeds",
       [&](auto& k, auto& v) {
         c.seeds.clear();
         for (const auto& s : SplitList(v)) c.seeds.push_back(ToUnsigned(k, s));
       }},
      {"output_dir", [&](auto&, auto& v) { c.output_dir = v; }},
      {"save_checkpoints", [&](auto& k, auto& v) { c.save_checkpoints = ToBool(k, v); }},
  };

  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    line = Trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw InvalidInput("config line " + std::to_string(line_no) +
                         ": expected 'key = value'");
    }
    const std::string key = Trim(line.substr(0, eq));
    const std::string value = Trim(line.substr(eq + 1));
    const auto it = setters.find(key);
    if (it == setters.end()) {
      throw InvalidInput("unknown config key '" + key + "'");
    }
    if (value.empty()) {
      throw InvalidInput("config key '" + key + "': missing value");
    }
    it->second(key, value);
  }

  if (eps || sigma) {
    const int k = h.num_layers;
    auto pick = [&](const std::optional<std::vector<double>>& list, int i,
                    double fallback, const char* key) {
      if (!list) return fallback;
      if (list->size() == 1) return list->front();
      if (static_cast<int>(list->size()) != k) {
        throw InvalidInput(std::string("config key '") + key +
                           "': needs one value or one per layer");
      }
      return (*list)[static_cast<std::size_t>(i)];
    };
    h.noise.clear();
    for (int i = 0; i < k; ++i) {
      hierarchy::HierarchyConfig defaults;
      const policy::NoiseSpec d = defaults.NoiseFor(i);
      policy::NoiseSpec n;
      n.random_action_prob = pick(eps, i, d.random_action_prob, "random_action_prob");
      n.sigma = pick(sigma, i, d.sigma, "sigma");
      h.noise.push_back(n);
    }
  }
  c.agent.eta = c.etas.front();
  c.Validate();
  return c;
}

RunConfig ParseConfigString(const std::string& text) {
  std::istringstream is(text);
  return ParseConfig(is);
}

RunConfig LoadConfig(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open config " + path.string());
  return ParseConfig(in);
}

std::string FormatConfig(const RunConfig& c) {
  const auto& h = c.agent.hierarchy;
  std::ostringstream os;
  os << "env = " << c.env << '\n'
     << "layers = " << h.num_layers << '\n'
     << "horizon = " << h.horizon << '\n'
     << "subgoal_test_rate = " << Real(h.subgoal_test_rate) << '\n';
  std::vector<double> gammas;
  std::vector<double> eps;
  std::vector<double> sig;
  for (int i = 0; i < h.num_layers; ++i) {
    gammas.push_back(h.GammaFor(i));
    eps.push_back(h.NoiseFor(i).random_action_prob);
    sig.push_back(h.NoiseFor(i).sigma);
  }
  os << "gamma = " << Join(gammas, Real) << '\n'
     << "random_action_prob = " << Join(eps, Real) << '\n'
     << "sigma = " << Join(sig, Real) << '\n'
     << "eta = " << Join(c.etas, Real) << '\n'
     << "lr = " << Real(c.agent.actor_critic.learning_rate) << '\n'
     << "batch_size = " << c.agent.batch_size << '\n'
     << "buffer_capacity = " << c.agent.buffer_capacity << '\n'
     << "normalizer_capacity = "
     << (c.agent.normalizer_capacity
             ? std::to_string(*c.agent.normalizer_capacity)
             : std::string("unbounded"))
     << '\n'
     << "curiosity = " << (c.agent.curiosity_enabled ? "true" : "false") << '\n'
     << "updates_per_round = " << c.agent.updates_per_round << '\n'
     << "forward_updates_per_round = " << c.agent.forward_updates_per_round << '\n'
     << "actor_critic_hidden = "
     << Join(c.agent.actor_critic.hidden, [](int x) { return std::to_string(x); })
     << '\n'
     << "forward_model_hidden = "
     << Join(c.agent.forward_model.hidden, [](int x) { return std::to_string(x); })
     << '\n'
     << "episodes = " << c.episodes << '\n'
     << "test_every = " << c.test_every << '\n'
     << "test_batch_size = " << c.test_batch_size << '\n'
     << "seeds = "
     << Join(c.seeds, [](std::uint64_t s) { return std::to_string(s); }) << '\n'
     << "output_dir = " << c.output_dir.string() << '\n'
     << "save_checkpoints = " << (c.save_checkpoints ? "true" : "false") << '\n';
  return os.str();
}

}  // namespace chac::runner
