#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <unordered_map>

#include "explorego/envs/env.hpp"

namespace explorego::explore {

inline constexpr int kMaxActions = 4;

/// Global state-action visit counts, shared by all workers of a run and
/// persistent across episodes.
class GlobalCounts {
 public:
  uint32_t increment(const envs::UnderlyingState& s, int a) { return ++counts_[s][a]; }

  uint32_t get(const envs::UnderlyingState& s, int a) const {
    const auto it = counts_.find(s);
    return it == counts_.end() ? 0 : it->second[a];
  }

 private:
  std::unordered_map<envs::UnderlyingState, std::array<uint32_t, kMaxActions>,
                     envs::StateHash>
      counts_;
};

/// One worker's view of the count tables: the shared global table plus an
/// episodic table owned by this worker and cleared at episode boundaries.
///
/// The intrinsic reward is the product of a global inverse-square-root term
/// and an episodic first-visit indicator,
///   eta(s,a) = N_g(s,a)^(-1/2) * [N_e(s,a) == 1],
/// evaluated on the post-increment counts so the first visit ever yields
/// exactly 1.
class CountTables {
 public:
  explicit CountTables(GlobalCounts& global) : global_(&global) {}

  /// Increments both counts, then returns eta for this visit.
  float observe_and_reward(const envs::UnderlyingState& s, int a) {
    const uint32_t n_global = global_->increment(s, a);
    const uint32_t n_episode = ++episode_[s][a];
    if (n_episode != 1) return 0.0f;
    return 1.0f / std::sqrt(static_cast<float>(n_global));
  }

  /// Clears the episodic table only.
  void reset_episode() { episode_.clear(); }

  uint32_t episode_count(const envs::UnderlyingState& s, int a) const {
    const auto it = episode_.find(s);
    return it == episode_.end() ? 0 : it->second[a];
  }

  const GlobalCounts& global() const { return *global_; }

 private:
  GlobalCounts* global_;
  std::unordered_map<envs::UnderlyingState, std::array<uint32_t, kMaxActions>,
                     envs::StateHash>
      episode_;
};

}  // namespace explorego::explore
