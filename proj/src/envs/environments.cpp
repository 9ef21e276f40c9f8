#include "chac/envs/environments.hpp"

#include <cmath>
#include <numbers>

namespace chac::envs {

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<Bounds> Repeat(Bounds b, int n) { return std::vector<Bounds>(n, b); }

// One damped point-mass step; returns (x, y, vx, vy).
Vec PointMassStep(const PointMassParams& pm, const Vec& s, const Vec& a) {
  Vec next = s;
  for (int d = 0; d < 2; ++d) {
    double v = pm.damping * s(2 + d) + pm.gain * a(d);
    double p = s(d) + v;
    if (p > pm.arena) {
      p = pm.arena;
      v = 0.0;
    } else if (p < -pm.arena) {
      p = -pm.arena;
      v = 0.0;
    }
    next(d) = p;
    next(2 + d) = v;
  }
  return next;
}

std::vector<Bounds> PointStateBounds(const PointMassParams& pm) {
  return {{-pm.arena, pm.arena},
          {-pm.arena, pm.arena},
          {-pm.max_speed, pm.max_speed},
          {-pm.max_speed, pm.max_speed}};
}

EnvSpec PointReacherSpec() {
  PointMassParams pm;
  EnvSpec s;
  s.name = "PointReacher2D";
  s.state_dim = 4;
  s.action_dim = 2;
  s.goal_dim = 2;
  s.action_bounds = Repeat({-1.0, 1.0}, 2);
  s.goal_bounds = Repeat({-pm.arena, pm.arena}, 2);
  s.state_bounds = PointStateBounds(pm);
  s.goal_thresholds = Vec::Constant(2, 0.25);
  s.max_episode_steps = 50;
  return s;
}

EnvSpec FourRoomsSpec() {
  EnvSpec s = PointReacherSpec();
  s.name = "FourRoomsPoint";
  s.max_episode_steps = 100;
  return s;
}

EnvSpec ArmSpec() {
  EnvSpec s;
  s.name = "ArmReacher3";
  s.state_dim = 6;
  s.action_dim = 3;
  s.goal_dim = 3;
  s.action_bounds = Repeat({-1.0, 1.0}, 3);
  const auto& limits = ArmReacher3::JointLimits();
  s.goal_bounds = {limits.begin(), limits.end()};
  s.state_bounds = s.goal_bounds;
  for (int j = 0; j < 3; ++j) s.state_bounds.push_back({-1.0, 1.0});
  s.goal_thresholds = Vec::Constant(3, 0.1);
  s.max_episode_steps = 50;
  return s;
}

EnvSpec CausalButtonSpec() {
  PointMassParams pm;
  EnvSpec s;
  s.name = "CausalButton";
  s.state_dim = 5;
  s.action_dim = 2;
  s.goal_dim = 3;
  s.action_bounds = Repeat({-1.0, 1.0}, 2);
  s.goal_bounds = {{-pm.arena, pm.arena}, {-pm.arena, pm.arena}, {0.0, 1.0}};
  s.state_bounds = PointStateBounds(pm);
  s.state_bounds.push_back({0.0, 1.0});
  s.goal_thresholds = Vec(3);
  s.goal_thresholds << 0.25, 0.25, 0.5;
  s.max_episode_steps = 100;
  return s;
}

}  // namespace

// ---- PointReacher2D ----

PointReacher2D::PointReacher2D() : GoalEnv(PointReacherSpec()) {}

Vec PointReacher2D::ProjectToGoal(const Vec& state) const {
  return state.head(2);
}

std::unique_ptr<GoalEnv> PointReacher2D::Clone() const {
  return std::make_unique<PointReacher2D>(*this);
}

Vec PointReacher2D::InitialState(Rng& rng) const {
  std::uniform_real_distribution<double> start(-1.0, 1.0);
  Vec s = Vec::Zero(4);
  s(0) = start(rng);
  s(1) = start(rng);
  return s;
}

Vec PointReacher2D::SampleGoal(Rng& rng) const {
  std::uniform_real_distribution<double> g(-pm_.arena + 0.5, pm_.arena - 0.5);
  Vec goal(2);
  goal(0) = g(rng);
  goal(1) = g(rng);
  return goal;
}

Vec PointReacher2D::Transition(const Vec& state, const Vec& action) const {
  return PointMassStep(pm_, state, action);
}

// ---- FourRoomsPoint ----

FourRoomsPoint::FourRoomsPoint() : GoalEnv(FourRoomsSpec()) {}

const std::array<Rect, 6>& FourRoomsPoint::Walls() {
  // doors: y in [2,3] and [-3,-2] on the vertical wall,
  //        x in [2,3] and [-3,-2] on the horizontal wall
  static const std::array<Rect, 6> walls = {{
      {-0.1, 0.1, -5.0, -3.0},
      {-0.1, 0.1, -2.0, 2.0},
      {-0.1, 0.1, 3.0, 5.0},
      {-5.0, -3.0, -0.1, 0.1},
      {-2.0, 2.0, -0.1, 0.1},
      {3.0, 5.0, -0.1, 0.1},
  }};
  return walls;
}

bool FourRoomsPoint::InsideWall(double x, double y) {
  for (const auto& w : Walls()) {
    if (w.StrictlyContains(x, y)) return true;
  }
  return false;
}

Vec FourRoomsPoint::ProjectToGoal(const Vec& state) const {
  return state.head(2);
}

std::unique_ptr<GoalEnv> FourRoomsPoint::Clone() const {
  return std::make_unique<FourRoomsPoint>(*this);
}

Vec FourRoomsPoint::InitialState(Rng& rng) const {
  std::uniform_real_distribution<double> u(-pm_.arena + 0.5, pm_.arena - 0.5);
  Vec s = Vec::Zero(4);
  do {
    s(0) = u(rng);
    s(1) = u(rng);
  } while (InsideWall(s(0), s(1)));
  return s;
}

Vec FourRoomsPoint::SampleGoal(Rng& rng) const {
  std::uniform_real_distribution<double> u(-pm_.arena + 0.5, pm_.arena - 0.5);
  Vec g(2);
  do {
    g(0) = u(rng);
    g(1) = u(rng);
  } while (InsideWall(g(0), g(1)));
  return g;
}

Vec FourRoomsPoint::Transition(const Vec& state, const Vec& action) const {
  const Vec free = PointMassStep(pm_, state, action);
  Vec next = state;
  // x first, then y from the updated x
  for (int d = 0; d < 2; ++d) {
    const double from = next(d);
    const double to = free(d);
    const double lo = std::min(from, to);
    const double hi = std::max(from, to);
    const double fixed = next(1 - d);
    bool blocked = false;
    for (const auto& w : Walls()) {
      const double a_lo = d == 0 ? w.x_lo : w.y_lo;
      const double a_hi = d == 0 ? w.x_hi : w.y_hi;
      const double b_lo = d == 0 ? w.y_lo : w.x_lo;
      const double b_hi = d == 0 ? w.y_hi : w.x_hi;
      const bool across = fixed > b_lo && fixed < b_hi;
      const bool overlaps = std::max(lo, a_lo) < std::min(hi, a_hi);
      if (across && overlaps) {
        blocked = true;
        break;
      }
    }
    if (blocked) {
      next(2 + d) = 0.0;
    } else {
      next(d) = to;
      next(2 + d) = free(2 + d);
    }
  }
  return next;
}

// ---- ArmReacher3 ----

ArmReacher3::ArmReacher3() : GoalEnv(ArmSpec()) {}

const std::array<Bounds, 3>& ArmReacher3::JointLimits() {
  static const std::array<Bounds, 3> limits = {
      {{-kPi, kPi}, {-kPi / 2.0, kPi / 2.0}, {-kPi / 2.0, kPi / 2.0}}};
  return limits;
}

Vec ArmReacher3::ProjectToGoal(const Vec& state) const { return state.head(3); }

std::unique_ptr<GoalEnv> ArmReacher3::Clone() const {
  return std::make_unique<ArmReacher3>(*this);
}

Vec ArmReacher3::InitialState(Rng&) const { return Vec::Zero(6); }

Vec ArmReacher3::SampleGoal(Rng& rng) const {
  Vec g(3);
  for (int j = 0; j < 3; ++j) {
    const auto& lim = JointLimits()[j];
    std::uniform_real_distribution<double> u(lim.lo + 0.1, lim.hi - 0.1);
    g(j) = u(rng);
  }
  return g;
}

Vec ArmReacher3::Transition(const Vec& state, const Vec& action) const {
  Vec next(6);
  for (int j = 0; j < 3; ++j) {
    next(j) = JointLimits()[j].clamp(state(j) + kDt * action(j));
    next(3 + j) = action(j);
  }
  return next;
}

// ---- CausalButton ----

CausalButton::CausalButton() : GoalEnv(CausalButtonSpec()) {}

Vec CausalButton::ProjectToGoal(const Vec& state) const {
  Vec g(3);
  g << state(0), state(1), state(4);
  return g;
}

std::unique_ptr<GoalEnv> CausalButton::Clone() const {
  return std::make_unique<CausalButton>(*this);
}

Vec CausalButton::InitialState(Rng& rng) const {
  std::uniform_real_distribution<double> start(-1.0, 1.0);
  Vec s = Vec::Zero(5);
  s(0) = start(rng);
  s(1) = start(rng);
  return s;  // lid closed
}

Vec CausalButton::SampleGoal(Rng& rng) const {
  std::uniform_real_distribution<double> u(-pm_.arena + 0.5, pm_.arena - 0.5);
  Vec g(3);
  // keep the target off the button so the two subtasks are distinct
  do {
    g(0) = u(rng);
    g(1) = u(rng);
  } while (std::hypot(g(0) - kButtonX, g(1) - kButtonY) < 2.0 * kButtonRadius);
  g(2) = 1.0;
  return g;
}

Vec CausalButton::Transition(const Vec& state, const Vec& action) const {
  Vec next(5);
  next.head(4) = PointMassStep(pm_, state.head(4), action);
  const bool pressed =
      std::hypot(next(0) - kButtonX, next(1) - kButtonY) <= kButtonRadius;
  next(4) = (state(4) >= 0.5 || pressed) ? 1.0 : 0.0;
  return next;
}

}  // namespace chac::envs
