#include "chac/policy/actor_critic.hpp"

#include <algorithm>
#include <cmath>

#include "chac/numeric/serialize.hpp"

namespace chac::policy {

using hindsight::Transition;
using numeric::MlpParameters;

void LayerUmdp::Validate() const {
  if (layer_index < 0 || state_dim <= 0 || goal_dim <= 0 || action_dim <= 0) {
    throw InvalidInput("layer UMDP dimensions must be positive");
  }
  if (!(gamma >= 0.0 && gamma < 1.0)) {
    throw InvalidInput("discount must lie in [0, 1)");
  }
  if (horizon <= 0) throw InvalidInput("horizon must be positive");
  if (static_cast<int>(action_bounds.size()) != action_dim ||
      static_cast<int>(goal_bounds.size()) != goal_dim ||
      static_cast<int>(state_bounds.size()) != state_dim) {
    throw InvalidInput("layer UMDP bounds do not match dimensions");
  }
  for (const auto* list : {&action_bounds, &goal_bounds, &state_bounds}) {
    for (const Bounds& b : *list) {
      if (!(b.hi > b.lo)) throw InvalidInput("empty bound interval");
    }
  }
}

void NoiseSpec::Validate() const {
  if (!(random_action_prob >= 0.0 && random_action_prob <= 1.0)) {
    throw InvalidInput("random action probability must lie in [0, 1]");
  }
  if (!(sigma >= 0.0)) throw InvalidInput("noise scale must be >= 0");
}

ActorCritic::ActorCritic(LayerUmdp umdp, const ActorCriticOptions& options,
                         Rng& init_rng)
    : umdp_(std::move(umdp)), learning_rate_(options.learning_rate) {
  umdp_.Validate();
  if (!(learning_rate_ > 0.0)) throw InvalidInput("learning rate must be > 0");
  std::vector<int> actor_widths = {umdp_.state_dim + umdp_.goal_dim};
  actor_widths.insert(actor_widths.end(), options.hidden.begin(),
                      options.hidden.end());
  actor_widths.push_back(umdp_.action_dim);
  std::vector<int> critic_widths = {umdp_.state_dim + umdp_.goal_dim +
                                    umdp_.action_dim};
  critic_widths.insert(critic_widths.end(), options.hidden.begin(),
                       options.hidden.end());
  critic_widths.push_back(1);
  actor_ = numeric::MakeMlp(actor_widths, numeric::OutputActivation::kTanh,
                            init_rng);
  critic_ = numeric::MakeMlp(critic_widths,
                             numeric::OutputActivation::kIdentity, init_rng);
  actor_opt_ = numeric::AdamState::For(actor_);
  critic_opt_ = numeric::AdamState::For(critic_);
}

void ActorCritic::ScaleInto(Eigen::Ref<Vec> out, const Vec& x,
                            const std::vector<Bounds>& bounds) const {
  if (x.size() != static_cast<Eigen::Index>(bounds.size())) {
    throw InvalidInput("layer " + std::to_string(umdp_.layer_index) +
                       ": input has wrong dimension");
  }
  for (Eigen::Index d = 0; d < x.size(); ++d) {
    out(d) = (x(d) - bounds[d].center()) / bounds[d].half_range();
  }
}

Vec ActorCritic::ActorInput(const Vec& state, const Vec& goal) const {
  Vec in(umdp_.state_dim + umdp_.goal_dim);
  ScaleInto(in.head(umdp_.state_dim), state, umdp_.state_bounds);
  ScaleInto(in.tail(umdp_.goal_dim), goal, umdp_.goal_bounds);
  return in;
}

Vec ActorCritic::Unsquash(const Vec& squashed) const {
  Vec a(umdp_.action_dim);
  for (int d = 0; d < umdp_.action_dim; ++d) {
    const Bounds& b = umdp_.action_bounds[d];
    a(d) = b.clamp(b.center() + b.half_range() * squashed(d));
  }
  return a;
}

void ActorCritic::CheckInBounds(const Vec& action) const {
  for (int d = 0; d < umdp_.action_dim; ++d) {
    const Bounds& b = umdp_.action_bounds[d];
    if (!(action(d) >= b.lo && action(d) <= b.hi)) {
      throw ContractViolation("layer " + std::to_string(umdp_.layer_index) +
                              ": action outside bounds");
    }
  }
}

Vec ActorCritic::Act(const Vec& state, const Vec& goal) const {
  Vec a = Unsquash(numeric::Forward(actor_, ActorInput(state, goal)));
  CheckInBounds(a);
  return a;
}

Vec ActorCritic::Act(const Vec& state, const Vec& goal, const NoiseSpec& noise,
                     Rng& rng, bool* perturbed) const {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Vec a;
  bool noisy = false;
  if (noise.random_action_prob > 0.0 && unit(rng) < noise.random_action_prob) {
    a.resize(umdp_.action_dim);
    for (int d = 0; d < umdp_.action_dim; ++d) {
      const Bounds& b = umdp_.action_bounds[d];
      a(d) = std::uniform_real_distribution<double>(b.lo, b.hi)(rng);
    }
    noisy = true;
  } else {
    a = Act(state, goal);
    if (noise.sigma > 0.0) {
      std::normal_distribution<double> gauss(0.0, 1.0);
      for (int d = 0; d < umdp_.action_dim; ++d) {
        const Bounds& b = umdp_.action_bounds[d];
        a(d) = b.clamp(a(d) + noise.sigma * (b.hi - b.lo) * gauss(rng));
      }
      noisy = true;
    }
  }
  CheckInBounds(a);
  if (perturbed != nullptr) *perturbed = noisy;
  return a;
}

double ActorCritic::Q(const Vec& state, const Vec& goal,
                      const Vec& action) const {
  Vec in(umdp_.state_dim + umdp_.goal_dim + umdp_.action_dim);
  in.head(umdp_.state_dim + umdp_.goal_dim) = ActorInput(state, goal);
  ScaleInto(in.tail(umdp_.action_dim), action, umdp_.action_bounds);
  return numeric::Forward(critic_, in)(0);
}

Mat ActorCritic::ActorInputs(std::span<const Transition> batch,
                             bool next_state) const {
  const int sd = umdp_.state_dim;
  const int gd = umdp_.goal_dim;
  Mat in(sd + gd, static_cast<Eigen::Index>(batch.size()));
  for (std::size_t j = 0; j < batch.size(); ++j) {
    const Transition& t = batch[j];
    auto col = in.col(static_cast<Eigen::Index>(j));
    ScaleInto(col.head(sd), next_state ? t.next_state : t.state,
              umdp_.state_bounds);
    ScaleInto(col.tail(gd), t.goal, umdp_.goal_bounds);
  }
  return in;
}

Mat ActorCritic::CriticInputs(std::span<const Transition> batch) const {
  const int sd = umdp_.state_dim;
  const int gd = umdp_.goal_dim;
  const int ad = umdp_.action_dim;
  Mat in(sd + gd + ad, static_cast<Eigen::Index>(batch.size()));
  in.topRows(sd + gd) = ActorInputs(batch, /*next_state=*/false);
  for (std::size_t j = 0; j < batch.size(); ++j) {
    ScaleInto(in.col(static_cast<Eigen::Index>(j)).tail(ad), batch[j].action,
              umdp_.action_bounds);
  }
  return in;
}

Vec ActorCritic::BellmanTargets(std::span<const Transition> batch) const {
  const double h = static_cast<double>(umdp_.horizon);
  const auto n = static_cast<Eigen::Index>(batch.size());
  Vec y(n);
  if (n == 0) return y;

  // Bootstrap values for the whole batch; terminal rows ignore theirs.
  const Mat next_in = ActorInputs(batch, /*next_state=*/true);
  const Mat next_action = numeric::Forward(actor_, next_in);
  Mat critic_in(next_in.rows() + next_action.rows(), n);
  critic_in << next_in, next_action;
  const Mat next_q = numeric::Forward(critic_, critic_in);

  for (Eigen::Index j = 0; j < n; ++j) {
    const Transition& t = batch[static_cast<std::size_t>(j)];
    double target = t.reward;
    if (!t.terminal()) target += umdp_.gamma * next_q(0, j);
    target = std::clamp(target, -h, 0.0);
    if (!(target >= -h && target <= 0.0)) {
      throw ContractViolation("critic target outside [-H, 0]");
    }
    y(j) = target;
  }
  return y;
}

double ActorCritic::BellmanTarget(const Transition& t) const {
  return BellmanTargets(std::span<const Transition>(&t, 1))(0);
}

double ActorCritic::UpdateCritic(std::span<const Transition> batch) {
  if (batch.empty()) throw InvalidInput("empty training batch");
  const double n = static_cast<double>(batch.size());
  const Vec y = BellmanTargets(batch);
  numeric::ForwardCache cache;
  const Mat q = numeric::Forward(critic_, CriticInputs(batch), &cache);
  const Eigen::RowVectorXd diff = q.row(0) - y.transpose();
  const double loss = diff.squaredNorm() / n;
  if (!std::isfinite(loss)) return std::numeric_limits<double>::quiet_NaN();
  const Mat grad = (2.0 / n) * diff;
  auto back = numeric::Backward(critic_, cache, grad);
  try {
    numeric::AdamStep(critic_, back.param_grads, critic_opt_, learning_rate_);
  } catch (const NonFiniteError&) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  return loss;
}

double ActorCritic::UpdateActor(std::span<const Transition> batch) {
  if (batch.empty()) throw InvalidInput("empty training batch");
  const double n = static_cast<double>(batch.size());
  const int sg = umdp_.state_dim + umdp_.goal_dim;

  numeric::ForwardCache actor_cache;
  const Mat sg_in = ActorInputs(batch, /*next_state=*/false);
  const Mat squashed = numeric::Forward(actor_, sg_in, &actor_cache);

  Mat critic_in(sg + umdp_.action_dim, sg_in.cols());
  critic_in << sg_in, squashed;
  numeric::ForwardCache critic_cache;
  const Mat q = numeric::Forward(critic_, critic_in, &critic_cache);
  const double objective = q.sum() / n;
  if (!std::isfinite(objective)) {
    return std::numeric_limits<double>::quiet_NaN();
  }

  // d(mean Q)/d(action input); the critic sees the squashed actor output.
  const Mat ones = Mat::Constant(1, q.cols(), 1.0 / n);
  const auto critic_back = numeric::Backward(critic_, critic_cache, ones);
  const Mat dq_da = critic_back.input_grad.bottomRows(umdp_.action_dim);
  // ascend Q == descend -Q
  auto actor_back = numeric::Backward(actor_, actor_cache, -dq_da);
  try {
    numeric::AdamStep(actor_, actor_back.param_grads, actor_opt_,
                      learning_rate_);
  } catch (const NonFiniteError&) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  return objective;
}

UpdateStats ActorCritic::Update(std::span<const Transition> batch) {
  UpdateStats s;
  s.critic_loss = UpdateCritic(batch);
  s.actor_objective = UpdateActor(batch);
  s.skipped = !std::isfinite(s.critic_loss) || !std::isfinite(s.actor_objective);
  return s;
}

void ActorCritic::Save(const std::filesystem::path& dir,
                       const std::string& prefix) const {
  numeric::SaveMlp(dir / (prefix + "_actor.bin"), actor_);
  numeric::SaveMlp(dir / (prefix + "_critic.bin"), critic_);
  numeric::SaveAdam(dir / (prefix + "_actor_adam.bin"), actor_opt_);
  numeric::SaveAdam(dir / (prefix + "_critic_adam.bin"), critic_opt_);
}

namespace {

void RequireSameShape(const MlpParameters& want, const MlpParameters& got,
                      const std::string& what) {
  bool ok = want.layers.size() == got.layers.size() &&
            want.output_activation == got.output_activation;
  for (std::size_t j = 0; ok && j < want.layers.size(); ++j) {
    ok = want.layers[j].out_dim() == got.layers[j].out_dim() &&
         want.layers[j].in_dim() == got.layers[j].in_dim();
  }
  if (!ok) throw InvalidInput(what + ": checkpoint shape does not fit layer");
}

}  // namespace

void ActorCritic::Load(const std::filesystem::path& dir,
                       const std::string& prefix) {
  MlpParameters actor = numeric::LoadMlp(dir / (prefix + "_actor.bin"));
  MlpParameters critic = numeric::LoadMlp(dir / (prefix + "_critic.bin"));
  RequireSameShape(actor_, actor, prefix + "_actor");
  RequireSameShape(critic_, critic, prefix + "_critic");
  numeric::AdamState actor_opt =
      numeric::LoadAdam(dir / (prefix + "_actor_adam.bin"));
  numeric::AdamState critic_opt =
      numeric::LoadAdam(dir / (prefix + "_critic_adam.bin"));
  actor_ = std::move(actor);
  critic_ = std::move(critic);
  actor_opt_ = std::move(actor_opt);
  critic_opt_ = std::move(critic_opt);
}

}  // namespace chac::policy
