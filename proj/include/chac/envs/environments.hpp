#pragma once

#include <array>

#include "chac/envs/goal_env.hpp"

namespace chac::envs {

// Damped point mass shared by the planar tasks:
//   v' = damping * v + gain * a,  p' = clamp(p + v', arena)
// A coordinate that hits the arena edge has its velocity zeroed.
struct PointMassParams {
  double arena = 5.0;
  double damping = 0.6;
  double gain = 0.5;
  double max_speed = 1.25;  // gain / (1 - damping)
};

// State (x, y, vx, vy); goal (x, y); threshold 0.25; 50 steps.
class PointReacher2D : public GoalEnv {
 public:
  PointReacher2D();
  Vec ProjectToGoal(const Vec& state) const override;
  std::unique_ptr<GoalEnv> Clone() const override;

 protected:
  Vec InitialState(Rng& rng) const override;
  Vec SampleGoal(Rng& rng) const override;
  Vec Transition(const Vec& state, const Vec& action) const override;

 private:
  PointMassParams pm_;
};

struct Rect {
  double x_lo, x_hi, y_lo, y_hi;
  bool StrictlyContains(double x, double y) const {
    return x > x_lo && x < x_hi && y > y_lo && y < y_hi;
  }
};

// PointReacher2D inside four rooms separated by 0.2-thick walls along the
// axes, each wall pierced by a 1.0-wide door. Moves are applied one axis at a
// time; an axis move whose swept segment enters a wall is cancelled and that
// velocity component zeroed. 100 steps.
class FourRoomsPoint : public GoalEnv {
 public:
  FourRoomsPoint();
  Vec ProjectToGoal(const Vec& state) const override;
  std::unique_ptr<GoalEnv> Clone() const override;

  static const std::array<Rect, 6>& Walls();
  static bool InsideWall(double x, double y);

 protected:
  Vec InitialState(Rng& rng) const override;
  Vec SampleGoal(Rng& rng) const override;
  Vec Transition(const Vec& state, const Vec& action) const override;

 private:
  PointMassParams pm_;
};

// Kinematic three-joint arm. State (q1..q3, w1..w3), action joint velocity
// commands; q' = clamp(q + dt * a, joint limits), w' = a. Goals are random
// joint configurations inside the limits; threshold 0.1 rad; 50 steps.
class ArmReacher3 : public GoalEnv {
 public:
  static constexpr double kDt = 0.5;

  ArmReacher3();
  Vec ProjectToGoal(const Vec& state) const override;
  std::unique_ptr<GoalEnv> Clone() const override;

  static const std::array<Bounds, 3>& JointLimits();

 protected:
  Vec InitialState(Rng& rng) const override;
  Vec SampleGoal(Rng& rng) const override;
  Vec Transition(const Vec& state, const Vec& action) const override;
};

// Point agent that must touch a button (opening a lid) before the target
// counts as reached. State (x, y, vx, vy, lid); goal (x, y, lid) with the
// sampled lid coordinate always 1. Threshold (0.25, 0.25, 0.5); 100 steps.
class CausalButton : public GoalEnv {
 public:
  static constexpr double kButtonX = -3.5;
  static constexpr double kButtonY = 3.5;
  static constexpr double kButtonRadius = 0.5;

  CausalButton();
  Vec ProjectToGoal(const Vec& state) const override;
  std::unique_ptr<GoalEnv> Clone() const override;

 protected:
  Vec InitialState(Rng& rng) const override;
  Vec SampleGoal(Rng& rng) const override;
  Vec Transition(const Vec& state, const Vec& action) const override;

 private:
  PointMassParams pm_;
};

}  // namespace chac::envs
