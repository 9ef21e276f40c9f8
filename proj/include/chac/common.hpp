#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace chac {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Every stochastic component draws from an explicitly passed engine.
using Rng = std::mt19937_64;

// Input violates a documented precondition (shape, range, unknown name).
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Call sequence violates an object protocol (step after episode end,
// relabeling at the wrong layer, ...).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// A numeric quantity that must be finite was not.
class NonFiniteError : public std::runtime_error {
 public:
  NonFiniteError(const std::string& what, int layer)
      : std::runtime_error(what), layer_(layer) {}
  int layer() const { return layer_; }

 private:
  int layer_;
};

// Closed interval for one action or goal dimension.
struct Bounds {
  double lo = -1.0;
  double hi = 1.0;

  double center() const { return 0.5 * (lo + hi); }
  double half_range() const { return 0.5 * (hi - lo); }
  double clamp(double x) const { return x < lo ? lo : (x > hi ? hi : x); }
};

}  // namespace chac
