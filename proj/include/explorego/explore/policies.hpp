#pragma once

#include <span>

#include "explorego/check.hpp"
#include "explorego/rng.hpp"

namespace explorego::explore {

/// Temporally equalised exploration: worker i of N acts with
///   beta_i = phi * lambda^(1 + i/(N-1) * alpha),
/// a schedule that is non-increasing in i (strictly decreasing for
/// lambda < 1, alpha > 0).
struct BetaSchedule {
  double phi = 0.5;
  double lambda = 0.9;
  double alpha = 25.0;
  int workers = 50;
};

std::vector<double> tee_betas(double phi, double lambda, double alpha, int workers);

inline std::vector<double> tee_betas(const BetaSchedule& s) {
  return tee_betas(s.phi, s.lambda, s.alpha, s.workers);
}

/// Uniform random action (epsilon-greedy with epsilon = 1).
inline int pure_policy_uniform(Rng& rng, int action_count) {
  check(action_count >= 1, "pure_policy_uniform needs at least one action");
  return static_cast<int>(rng.uniform_int(action_count));
}

/// Greedy on the intrinsic action-value head, with probability eps a uniform
/// action instead. Ties break to the lowest index.
int pure_policy_ugreedy(std::span<const float> u_values, float eps, Rng& rng);

/// Dithering used when the pure-exploration policy is the U-greedy one.
inline constexpr float kPureExplorationEpsilon = 0.01f;

}  // namespace explorego::explore
