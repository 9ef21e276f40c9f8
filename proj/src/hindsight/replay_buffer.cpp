#include "chac/hindsight/replay_buffer.hpp"

#include <ostream>

namespace chac::hindsight {

namespace {

void PutVec(std::ostream& out, const Vec& v) {
  out << ',';
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i > 0) out << ' ';
    out << v(i);
  }
}

}  // namespace

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw InvalidInput("replay capacity must be positive");
  slots_.reserve(std::min<std::size_t>(capacity, 1 << 16));
}

void ReplayBuffer::Add(Transition t) {
  if (slots_.size() < capacity_) {
    slots_.push_back(std::move(t));
    ++size_;
    head_ = slots_.size() % capacity_;
    return;
  }
  slots_[head_] = std::move(t);
  head_ = (head_ + 1) % capacity_;
}

const Transition& ReplayBuffer::at(std::size_t i) const {
  if (i >= size_) throw InvalidInput("replay index out of range");
  const std::size_t oldest = size_ < capacity_ ? 0 : head_;
  return slots_[(oldest + i) % capacity_];
}

std::optional<std::vector<Transition>> ReplayBuffer::Sample(std::size_t n,
                                                            Rng& rng) const {
  if (empty()) return std::nullopt;
  std::uniform_int_distribution<std::size_t> pick(0, size_ - 1);
  std::vector<Transition> batch;
  batch.reserve(n);
  for (std::size_t i = 0; i < n; ++i) batch.push_back(slots_[pick(rng)]);
  return batch;
}

void ReplayBuffer::DumpCsv(std::ostream& out) const {
  const auto old_precision = out.precision(17);
  out << "layer,state,action,next_state,goal,extrinsic_reward,reward,"
         "raw_curiosity,achieved,is_subgoal_test,test_mode\n";
  for (std::size_t i = 0; i < size_; ++i) {
    const Transition& t = at(i);
    out << t.layer;
    PutVec(out, t.state);
    PutVec(out, t.action);
    PutVec(out, t.next_state);
    PutVec(out, t.goal);
    out << ',' << t.extrinsic_reward << ',' << t.reward << ','
        << t.raw_curiosity << ',' << t.achieved << ',' << t.is_subgoal_test
        << ',' << t.test_mode << '\n';
  }
  out.precision(old_precision);
}

}  // namespace chac::hindsight
