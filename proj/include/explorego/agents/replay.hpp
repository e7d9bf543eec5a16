#pragma once

#include <vector>

#include "explorego/check.hpp"
#include "explorego/rng.hpp"
#include "explorego/transition.hpp"

namespace explorego::agents {

/// Fixed-capacity ring of transitions with strictly FIFO eviction and
/// uniform-with-replacement sampling over the current contents.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(size_t capacity) : capacity_(capacity) {
    check(capacity > 0, "replay buffer capacity must be positive");
    ring_.reserve(capacity);
  }

  void push(Transition t) {
    if (ring_.size() < capacity_) {
      ring_.push_back(std::move(t));
    } else {
      ring_[cursor_] = std::move(t);
    }
    cursor_ = (cursor_ + 1) % capacity_;
  }

  const Transition& sample_one(Rng& rng) const {
    check(!ring_.empty(), "sampling from an empty replay buffer");
    return ring_[rng.uniform_int(ring_.size())];
  }

  std::vector<const Transition*> sample(size_t n, Rng& rng) const {
    check(n <= ring_.size(), "sample size exceeds replay buffer contents");
    std::vector<const Transition*> batch(n);
    for (auto& slot : batch) slot = &sample_one(rng);
    return batch;
  }

  size_t size() const { return ring_.size(); }
  size_t capacity() const { return capacity_; }

  auto begin() const { return ring_.begin(); }
  auto end() const { return ring_.end(); }

 private:
  size_t capacity_;
  size_t cursor_ = 0;
  std::vector<Transition> ring_;
};

}  // namespace explorego::agents
