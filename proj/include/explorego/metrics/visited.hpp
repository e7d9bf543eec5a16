#pragma once

#include <cstdint>
#include <unordered_map>

#include "explorego/envs/env.hpp"

namespace explorego::metrics {

/// State-action pairs encountered at any point during training (real steps,
/// pure-exploration steps and injected transitions alike). Backing store
/// for the coverage diagnostic; actions are recorded as a bitmask per
/// state.
class VisitedSet {
 public:
  void add(const envs::UnderlyingState& s, int action) {
    auto& mask = visited_[s];
    const uint8_t bit = static_cast<uint8_t>(1u << action);
    if ((mask & bit) == 0) {
      mask |= bit;
      ++pair_count_;
    }
  }

  bool contains(const envs::UnderlyingState& s, int action) const {
    const auto it = visited_.find(s);
    return it != visited_.end() && (it->second & (1u << action)) != 0;
  }

  size_t pair_count() const { return pair_count_; }

 private:
  std::unordered_map<envs::UnderlyingState, uint8_t, envs::StateHash> visited_;
  size_t pair_count_ = 0;
};

}  // namespace explorego::metrics
