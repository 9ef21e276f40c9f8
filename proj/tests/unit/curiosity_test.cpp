#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "chac/curiosity/curiosity.hpp"
#include "chac/numeric/gradient_check.hpp"

namespace chac::curiosity {
namespace {

using hindsight::Transition;

Vec V(std::initializer_list<double> xs) {
  Vec v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

TEST(RawCuriosity, HalfMeanSquaredError) {
  EXPECT_DOUBLE_EQ(RawCuriosity(V({1, 2}), V({0, 0})), (1.0 + 4.0) / 2.0 / 2.0);
  EXPECT_EQ(RawCuriosity(V({3, -1, 2}), V({3, -1, 2})), 0.0);
  EXPECT_THROW(RawCuriosity(V({1}), V({1, 2})), InvalidInput);
}

TEST(Mix, Examples) {
  EXPECT_EQ(Mix(1.0, -1.0, -0.3), -1.0);
  EXPECT_EQ(Mix(0.0, -1.0, -0.3), -0.3);
  EXPECT_DOUBLE_EQ(Mix(0.5, -1.0, 0.0), -0.5);
  EXPECT_DOUBLE_EQ(Mix(0.25, 0.0, -1.0), -0.75);
  EXPECT_THROW(Mix(1.1, -1.0, 0.0), InvalidInput);
  EXPECT_THROW(Mix(-0.1, -1.0, 0.0), InvalidInput);
}

TEST(Mix, StaysInUnitBand) {
  Rng rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 10000; ++i) {
    const double m = Mix(u(rng), -u(rng), -u(rng));
    ASSERT_GE(m, -1.0);
    ASSERT_LE(m, 0.0);
  }
}

TEST(Normalizer, EndpointsAndMidpoint) {
  CuriosityNormalizer n;
  EXPECT_EQ(n.Normalize(2.0), -1.0);  // degenerate history
  EXPECT_EQ(n.Normalize(4.0), 0.0);
  EXPECT_EQ(n.Normalize(3.0), -0.5);
  EXPECT_EQ(n.Normalize(2.0), -1.0);
  EXPECT_EQ(n.Peek(4.0), 0.0);
  EXPECT_EQ(n.size(), 4u);
}

TEST(Normalizer, RejectsInvalidValues) {
  CuriosityNormalizer n;
  EXPECT_THROW(n.Normalize(-0.1), InvalidInput);
  EXPECT_THROW(n.Normalize(std::nan("")), InvalidInput);
  EXPECT_THROW(CuriosityNormalizer(0), InvalidInput);
  EXPECT_TRUE(n.empty());
}

TEST(Normalizer, WindowExtremaMatchScan) {
  CuriosityNormalizer n(50);
  Rng rng(12);
  std::exponential_distribution<double> e(1.0);
  for (int i = 0; i < 5000; ++i) {
    const double raw = e(rng);
    const double c = n.Normalize(raw);
    const auto& h = n.history();
    ASSERT_LE(h.size(), 50u);
    const auto [lo, hi] = std::minmax_element(h.begin(), h.end());
    ASSERT_EQ(n.min(), *lo);
    ASSERT_EQ(n.max(), *hi);
    const double want = *hi > *lo ? (raw - *lo) / (*hi - *lo) - 1.0 : -1.0;
    ASSERT_NEAR(c, want, 1e-15);
  }
}

TEST(Normalizer, UnboundedKeepsEverything) {
  CuriosityNormalizer n(std::nullopt);
  for (int i = 0; i < 20000; ++i) n.Normalize(static_cast<double>(i % 97));
  EXPECT_EQ(n.size(), 20000u);
  EXPECT_EQ(n.min(), 0.0);
  EXPECT_EQ(n.max(), 96.0);
}

TEST(Normalizer, PropertyOutputInBand) {
  Rng rng(77);
  std::uniform_int_distribution<int> len(1, 200);
  std::lognormal_distribution<double> val(0.0, 2.0);
  for (int h = 0; h < 500; ++h) {
    CuriosityNormalizer n(len(rng));
    const int steps = len(rng);
    for (int i = 0; i < steps; ++i) {
      const double c = n.Normalize(val(rng));
      ASSERT_GE(c, -1.0);
      ASSERT_LE(c, 0.0);
    }
  }
}

ForwardModel SmallModel(std::uint64_t seed, std::vector<int> hidden = {32, 32}) {
  ForwardModelOptions o;
  o.hidden = std::move(hidden);
  Rng rng(seed);
  return ForwardModel({{-5, 5}, {-5, 5}}, {{-1, 1}}, o, rng);
}

std::vector<Transition> LinearBatch(int n, Rng& rng) {
  // s' = A s + B a
  std::uniform_real_distribution<double> s(-5.0, 5.0), a(-1.0, 1.0);
  std::vector<Transition> b;
  for (int i = 0; i < n; ++i) {
    Transition t;
    t.state = V({s(rng), s(rng)});
    t.action = V({a(rng)});
    t.next_state = V({0.9 * t.state(0) + 0.1 * t.state(1) + 0.5 * t.action(0),
                      -0.2 * t.state(0) + 0.8 * t.state(1) - 0.3 * t.action(0)});
    b.push_back(std::move(t));
  }
  return b;
}

TEST(ForwardModel, LossMatchesRawCuriosityMean) {
  auto m = SmallModel(1);
  Rng rng(2);
  const auto batch = LinearBatch(10, rng);
  double mean = 0.0;
  for (const auto& t : batch) {
    mean += RawCuriosity(t.next_state, m.Predict(t.state, t.action));
  }
  EXPECT_NEAR(m.Loss(batch), mean / batch.size(), 1e-12);
  EXPECT_THROW(m.Loss({}), InvalidInput);
}

TEST(ForwardModel, GradientMatchesFiniteDifferences) {
  auto m = SmallModel(4, {8, 8});
  Rng rng(5);
  const auto batch = LinearBatch(6, rng);
  const numeric::LossFn loss = [&](const numeric::MlpParameters& p,
                                   numeric::MlpGradients* g) {
    auto probe = m;
    probe.net() = p;
    if (g) *g = probe.LossGradient(batch);
    return probe.Loss(batch);
  };
  const auto r = numeric::GradientCheck(m.net(), loss, 1e-4);
  EXPECT_LT(r.max_relative_error, 1e-4);
}

TEST(ForwardModel, LearnsLinearSystem) {
  auto m = SmallModel(6);
  Rng rng(7);
  const auto probe = LinearBatch(500, rng);
  const double initial = m.Loss(probe);
  for (int i = 0; i < 2000; ++i) m.Train(LinearBatch(64, rng));
  EXPECT_LT(m.Loss(probe), 0.01 * initial);
}

TEST(ForwardModel, ExactModelGivesZeroLoss) {
  auto m = SmallModel(8);
  Transition t;
  t.state = V({1, 2});
  t.action = V({0.5});
  t.next_state = m.Predict(t.state, t.action);
  std::vector<Transition> same(8, t);
  const auto before = m.net();
  // batched and single-sample products may round differently
  EXPECT_LT(m.Train(same), 1e-25);
  EXPECT_LT(numeric::MaxAbsDifference(before, m.net()), 1e-9);
}

TEST(ForwardModel, SaveLoadRoundTrip) {
  auto m = SmallModel(9);
  Rng rng(1);
  m.Train(LinearBatch(16, rng));
  const auto dir = std::filesystem::temp_directory_path() / "chac_fw_roundtrip";
  std::filesystem::create_directories(dir);
  m.Save(dir, "layer0");
  auto other = SmallModel(10);
  other.Load(dir, "layer0");
  EXPECT_EQ(numeric::MaxAbsDifference(m.net(), other.net()), 0.0);
  EXPECT_EQ(other.optimizer().step_count, 1u);
  auto wrong = SmallModel(10, {4});
  EXPECT_THROW(wrong.Load(dir, "layer0"), InvalidInput);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace chac::curiosity
