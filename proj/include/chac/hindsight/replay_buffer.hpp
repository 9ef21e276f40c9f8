#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <vector>

#include "chac/hindsight/transition.hpp"

namespace chac::hindsight {

// Fixed-capacity FIFO ring of transitions with uniform sampling.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity);

  void Add(Transition t);

  std::size_t size() const { return size_; }
  std::size_t capacity() const { return capacity_; }
  bool empty() const { return size_ == 0; }

  // i = 0 is the oldest retained transition.
  const Transition& at(std::size_t i) const;

  // n draws uniformly with replacement, returned by value. std::nullopt when
  // the buffer is empty: the caller skips training this round.
  std::optional<std::vector<Transition>> Sample(std::size_t n, Rng& rng) const;

  // One transition per row, tagged with its layer.
  void DumpCsv(std::ostream& out) const;

 private:
  std::size_t capacity_;
  std::size_t size_ = 0;
  std::size_t head_ = 0;  // next write slot
  std::vector<Transition> slots_;
};

}  // namespace chac::hindsight
