#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "explorego/check.hpp"

namespace explorego::neural {

struct GaeParams {
  double gamma = 0.99;
  double lambda = 0.95;
};

/// Generalised advantage estimation over one trajectory segment:
///   delta_t = r_t + gamma * V_{t+1} * (1 - done_t) - V_t
///   A_t     = delta_t + gamma * lambda * (1 - done_t) * A_{t+1}
/// with V_{T} = bootstrap_value. Truncated segments pass done = 0 on the
/// final step together with the critic's value of the successor state, so
/// bootstrapping proceeds through timeouts. returns = advantages + values.
template <class T>
void gae(std::span<const T> rewards, std::span<const T> values,
         std::span<const uint8_t> dones, T bootstrap_value, const GaeParams& p,
         std::vector<T>& advantages, std::vector<T>& returns) {
  check(rewards.size() == values.size() && rewards.size() == dones.size(),
        "gae inputs must have equal lengths");
  const size_t n = rewards.size();
  advantages.assign(n, T(0));
  returns.assign(n, T(0));
  T next_value = bootstrap_value;
  T next_advantage = T(0);
  for (size_t t = n; t-- > 0;) {
    const T not_done = dones[t] ? T(0) : T(1);
    const T delta = rewards[t] + static_cast<T>(p.gamma) * next_value * not_done - values[t];
    next_advantage = delta + static_cast<T>(p.gamma * p.lambda) * not_done * next_advantage;
    advantages[t] = next_advantage;
    returns[t] = next_advantage + values[t];
    next_value = values[t];
  }
}

}  // namespace explorego::neural
