#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "chac/runner/config.hpp"
#include "chac/runner/report.hpp"
#include "chac/runner/trainer.hpp"

namespace chac::runner {
namespace {

namespace fs = std::filesystem;

fs::path TempDir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("chac_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void WriteFile(const fs::path& p, const std::string& text) {
  std::ofstream(p) << text;
}

std::string ReadFile(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* kTiny = R"(# tiny run
env = PointReacher2D
layers = 2
horizon = 5
eta = 0.5
actor_critic_hidden = 16, 16
forward_model_hidden = 16
batch_size = 32
updates_per_round = 2
episodes = 6
test_every = 3
test_batch_size = 4
seeds = 3
save_checkpoints = false
)";

TEST(Config, ParsesKeysAndComments) {
  const auto c = ParseConfigString(kTiny);
  EXPECT_EQ(c.env, "PointReacher2D");
  EXPECT_EQ(c.agent.hierarchy.num_layers, 2);
  EXPECT_EQ(c.agent.hierarchy.horizon, 5);
  EXPECT_EQ(c.etas, std::vector<double>{0.5});
  EXPECT_EQ(c.agent.actor_critic.hidden, (std::vector<int>{16, 16}));
  EXPECT_EQ(c.seeds, std::vector<std::uint64_t>{3});
  EXPECT_FALSE(c.save_checkpoints);
}

TEST(Config, Defaults) {
  const auto c = ParseConfigString("");
  EXPECT_EQ(c.agent.batch_size, 1024u);
  EXPECT_EQ(c.agent.actor_critic.learning_rate, 1e-3);
  EXPECT_EQ(c.agent.forward_model.hidden, (std::vector<int>{256, 256, 256}));
  EXPECT_EQ(c.test_every, 10);
  EXPECT_EQ(c.test_batch_size, 20);
  EXPECT_EQ(c.etas.size(), 5u);
  EXPECT_EQ(c.seeds.size(), 5u);
  EXPECT_EQ(c.agent.normalizer_capacity, std::optional<std::size_t>(10000));
}

TEST(Config, UnknownKeyIsNamed) {
  try {
    ParseConfigString("env = PointReacher2D\nlearning_rate = 0.1\n");
    FAIL();
  } catch (const InvalidInput& e) {
    EXPECT_NE(std::string(e.what()).find("learning_rate"), std::string::npos);
  }
}

TEST(Config, BadValuesRejected) {
  EXPECT_THROW(ParseConfigString("layers = two"), InvalidInput);
  EXPECT_THROW(ParseConfigString("eta = 1.5"), InvalidInput);
  EXPECT_THROW(ParseConfigString("env = Nowhere"), InvalidInput);
  EXPECT_THROW(ParseConfigString("just words"), InvalidInput);
  EXPECT_THROW(ParseConfigString("seeds ="), InvalidInput);
  EXPECT_THROW(ParseConfigString("layers = 2\nsigma = 0.1, 0.2, 0.3"), InvalidInput);
}

TEST(Config, FormatRoundTrips) {
  auto c = ParseConfigString(std::string(kTiny) +
                             "normalizer_capacity = unbounded\nsigma = 0.1, 0.02\n");
  const std::string text = FormatConfig(c);
  const auto back = ParseConfigString(text);
  EXPECT_EQ(FormatConfig(back), text);
  EXPECT_FALSE(back.agent.normalizer_capacity.has_value());
  EXPECT_EQ(back.agent.hierarchy.NoiseFor(1).sigma, 0.02);
}

TEST(Metrics, HeaderFollowsRowLayout) {
  EXPECT_EQ(MetricsHeader(1),
            "seed,episode,success_rate,critic_loss_0,actor_objective_0,"
            "forward_loss_0,raw_curiosity_mean_0,curiosity_min_0,curiosity_max_0");
  MetricsRow row;
  row.seed = 2;
  row.episode = 10;
  row.success_rate = 0.1;
  row.layers.push_back({0.5, -2.0, std::nullopt, std::nullopt, std::nullopt, std::nullopt});
  EXPECT_EQ(FormatMetricsRow(row), "2,10,0.10000000000000001,0.5,-2,,,,");
}

TEST(Train, RowsAndDeterminism) {
  const auto c = ParseConfigString(kTiny);
  std::ostringstream a, b;
  TrainOptions oa, ob;
  oa.metrics = &a;
  ob.metrics = &b;
  const auto r = TrainSeed(c, 0.5, 3, oa);
  TrainSeed(c, 0.5, 3, ob);
  EXPECT_EQ(r.rows.size(), 2u);
  EXPECT_EQ(r.rows[1].episode, 6);
  EXPECT_EQ(a.str(), b.str());
  EXPECT_TRUE(r.rows[0].layers[0].forward_loss.has_value());
  std::ostringstream other;
  TrainOptions oc;
  oc.metrics = &other;
  TrainSeed(c, 0.5, 4, oc);
  EXPECT_NE(a.str(), other.str());
}

TEST(Train, WritesFilesAndCheckpoints) {
  const auto dir = TempDir("train");
  auto c = ParseConfigString(kTiny);
  c.output_dir = dir;
  c.save_checkpoints = true;
  c.etas = {0.5, 1.0};
  const auto files = Train(c);
  ASSERT_EQ(files.size(), 2u);
  EXPECT_EQ(files[0].filename(), "metrics_eta0.5_seed3.csv");
  EXPECT_EQ(files[1].filename(), "metrics_eta1_seed3.csv");
  EXPECT_TRUE(fs::exists(dir / "eta0.5_seed3" / "config.txt"));
  EXPECT_TRUE(fs::exists(dir / "eta1_seed3" / "layer1_critic.bin"));
  EXPECT_TRUE(fs::exists(dir / "eta1_seed3" / "layer0_forward.bin"));

  const double rate = Evaluate(dir / "eta0.5_seed3", 5, 1);
  EXPECT_GE(rate, 0.0);
  EXPECT_LE(rate, 1.0);
  EXPECT_EQ(rate, Evaluate(dir / "eta0.5_seed3", 5, 1));
  EXPECT_THROW(Evaluate(dir / "eta0.5_seed3", 0, 1), InvalidInput);
  EXPECT_THROW(Evaluate(dir / "missing", 3, 1), InvalidInput);
  fs::remove_all(dir);
}

TEST(Evaluate, UntrainedAgentRarelySucceeds) {
  auto c = ParseConfigString(kTiny);
  auto env = envs::MakeEnv("PointReacher2D");
  Rng init(0);
  hierarchy::Agent agent(env->spec(), c.agent, init);
  EXPECT_LT(EvaluateAgent(agent, *env, 100, 5), 0.2);
  EXPECT_THROW(EvaluateAgent(agent, *env, 0, 5), InvalidInput);
}

std::string Metrics(std::initializer_list<std::pair<int, double>> rows) {
  std::string s = "seed,episode,success_rate\n";
  for (const auto& [ep, rate] : rows) {
    s += "0," + std::to_string(ep) + "," + std::to_string(rate) + "\n";
  }
  return s;
}

TEST(Aggregate, MeanAndPopulationStd) {
  const auto dir = TempDir("agg");
  WriteFile(dir / "a.csv", Metrics({{10, 0.4}}));
  WriteFile(dir / "b.csv", Metrics({{10, 0.6}}));
  const auto curves = Aggregate({dir / "a.csv", dir / "b.csv"});
  ASSERT_EQ(curves.size(), 1u);
  EXPECT_EQ(curves[0].label, "mean");
  EXPECT_NEAR(curves[0].points[0].mean, 0.5, 1e-12);
  EXPECT_NEAR(curves[0].points[0].stddev, 0.1, 1e-12);
  EXPECT_EQ(curves[0].points[0].seeds, 2);
  fs::remove_all(dir);
}

TEST(Aggregate, IdenticalFilesHaveZeroStd) {
  const auto dir = TempDir("agg_same");
  const auto m = Metrics({{10, 0.3}, {20, 0.7}});
  WriteFile(dir / "a.csv", m);
  WriteFile(dir / "b.csv", m);
  const auto curves = Aggregate({dir / "a.csv", dir / "b.csv"});
  for (const auto& p : curves[0].points) EXPECT_EQ(p.stddev, 0.0);
  fs::remove_all(dir);
}

TEST(Aggregate, ThreeFileFixture) {
  const auto dir = TempDir("agg3");
  WriteFile(dir / "metrics_eta0.5_seed0.csv", Metrics({{10, 0.0}, {20, 0.5}}));
  WriteFile(dir / "metrics_eta0.5_seed1.csv", Metrics({{10, 0.3}, {20, 0.5}}));
  WriteFile(dir / "metrics_eta0.5_seed2.csv", Metrics({{10, 0.6}, {20, 1.0}}));
  const auto curves = Aggregate({dir / "metrics_eta0.5_seed0.csv",
                                 dir / "metrics_eta0.5_seed1.csv",
                                 dir / "metrics_eta0.5_seed2.csv"});
  ASSERT_EQ(curves.size(), 1u);
  EXPECT_EQ(curves[0].label, "eta=0.5");
  const auto& p = curves[0].points;
  EXPECT_NEAR(p[0].mean, 0.3, 1e-12);
  EXPECT_NEAR(p[0].stddev, std::sqrt(0.06), 1e-12);
  EXPECT_NEAR(p[1].mean, 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(p[1].stddev, std::sqrt((2 * 0.25 / 9 + 0.25 * 4 / 9) / 3), 1e-12);

  std::ostringstream os;
  WriteCurves(os, curves);
  std::istringstream is(os.str());
  const auto back = ReadCurves(is);
  EXPECT_EQ(back[0].points[1].mean, p[1].mean);
  fs::remove_all(dir);
}

TEST(Aggregate, MisalignedFilesNamed) {
  const auto dir = TempDir("agg_bad");
  WriteFile(dir / "a.csv", Metrics({{10, 0.1}, {20, 0.2}}));
  WriteFile(dir / "b.csv", Metrics({{10, 0.1}, {30, 0.2}}));
  try {
    Aggregate({dir / "a.csv", dir / "b.csv"});
    FAIL();
  } catch (const InvalidInput& e) {
    EXPECT_NE(std::string(e.what()).find("b.csv"), std::string::npos);
  }
  EXPECT_THROW(Aggregate({}), InvalidInput);
  fs::remove_all(dir);
}

TEST(Plot, FourCurvesFourLegendEntries) {
  std::vector<Curve> curves;
  for (const char* l : {"eta=0", "eta=0.5", "eta=0.75", "eta=1"}) {
    curves.push_back({l, {{10, 1, 0.1, 0.05}, {20, 1, 0.4, 0.1}}});
  }
  std::ostringstream os;
  PlotOptions opts;
  opts.smoothing = 2;
  WriteSvg(os, curves, opts);
  const std::string svg = os.str();
  std::size_t n = 0;
  for (auto pos = svg.find("class=\"legend-entry\""); pos != std::string::npos;
       pos = svg.find("class=\"legend-entry\"", pos + 1)) {
    ++n;
  }
  EXPECT_EQ(n, 4u);
  EXPECT_NE(svg.find(">episodes<"), std::string::npos);
  EXPECT_NE(svg.find(">success rate<"), std::string::npos);
  EXPECT_NE(svg.find("fill-opacity=\"0.2\""), std::string::npos);
  EXPECT_THROW(WriteSvg(os, {}), InvalidInput);
}

}  // namespace
}  // namespace chac::runner
