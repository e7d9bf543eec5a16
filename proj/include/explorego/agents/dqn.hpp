#pragma once

#include <span>
#include <utility>
#include <vector>

#include "explorego/envs/env.hpp"
#include "explorego/neural/adam.hpp"
#include "explorego/neural/mlp.hpp"
#include "explorego/transition.hpp"

namespace explorego::agents {

struct DqnConfig {
  double lr_q = 5e-4;
  double lr_u = 1e-3;
  double adam_eps = 1e-8;
  double tau_q = 0.05;
  double tau_u = 0.005;
  double beta = 0.01;      // intrinsic coefficient in acting
  double eps_init = 1.0;   // linear epsilon schedule
  double eps_final = 0.01;
  double eps_fraction = 0.125;
  size_t buffer = 500'000;
  int batch = 256;
  double gamma = 0.99;
  int train_freq = 50;       // collected (non pure-exploration) steps per gradient step
  int target_interval = 50;  // env steps between soft target updates
  double grad_clip = 1.0;
  std::vector<int> hidden = {512, 256};
};

/// Dual-head value learner: Q estimates the extrinsic action values, U the
/// intrinsic (count-bonus) ones, each with its own target network and Adam
/// state. Rollout actions follow argmax_a Q(s,a) + beta * U(s,a) under an
/// epsilon-greedy wrapper; evaluation acts with beta = 0, epsilon = 0.
class DqnAgent {
 public:
  DqnAgent(int obs_size, int n_actions, const DqnConfig& cfg, Rng& init_rng);

  /// Epsilon-greedy over Q + beta * U, ties to the lowest index.
  int act(std::span<const float> obs, float eps, float beta, Rng& rng) const;
  int act_greedy(std::span<const float> obs) const;

  /// One gradient step per head on mean-squared TD errors:
  ///   y_Q = r   + gamma * max_a' Q_target(s',a') * (1 - done)
  ///   y_U = eta + gamma * max_a' U_target(s',a') * (1 - done).
  /// Timeouts keep done = 0 so bootstrapping proceeds through truncation.
  std::pair<double, double> update(const envs::Env& env,
                                   std::span<const Transition* const> batch);

  void soft_update_targets();

  /// Linear schedule from eps_init to eps_final over the first eps_fraction
  /// of the step budget.
  float epsilon_at(uint64_t env_steps, uint64_t total_steps) const;

  const neural::Mlp<float>& q_net() const { return q_; }
  const neural::Mlp<float>& u_net() const { return u_; }
  neural::Mlp<float>& q_net() { return q_; }
  neural::Mlp<float>& u_net() { return u_; }
  neural::Mlp<float>& q_target_net() { return q_target_; }
  neural::Mlp<float>& u_target_net() { return u_target_; }
  const DqnConfig& config() const { return cfg_; }

  void u_values(std::span<const float> obs, std::vector<float>& out) const;

 private:
  DqnConfig cfg_;
  neural::Mlp<float> q_, q_target_, u_, u_target_;
  neural::Adam<float> adam_q_, adam_u_;
  neural::Grads<float> grads_q_, grads_u_;
  mutable std::vector<float> scratch_q_, scratch_u_, scratch_obs_;
};

}  // namespace explorego::agents
