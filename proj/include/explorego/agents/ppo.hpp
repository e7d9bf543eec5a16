#pragma once

#include <span>
#include <vector>

#include "explorego/envs/env.hpp"
#include "explorego/neural/adam.hpp"
#include "explorego/neural/categorical.hpp"
#include "explorego/neural/gae.hpp"
#include "explorego/neural/mlp.hpp"
#include "explorego/transition.hpp"

namespace explorego::agents {

/// How a PPO agent turns transitions into training rewards.
enum class RewardMode {
  Extrinsic,      // r
  Shaped,         // r + beta * eta
  PureIntrinsic,  // beta * eta (the parallel pure-exploration agent)
};

struct PpoConfig {
  double lr = 5e-4;
  double adam_eps = 1e-5;
  double gamma = 0.99;
  double gae_lambda = 0.95;
  double clip = 0.2;
  double entropy_coeff = 0.01;
  double vf_coeff = 0.5;
  int epochs = 5;
  int minibatch_size = 256;  // used when minibatches == 0
  int minibatches = 0;       // fixed minibatch count per epoch when > 0
  int rollout_steps = 12'800;  // total env steps per collection round
  double beta = 0.0;           // intrinsic coefficient for Shaped / PureIntrinsic
  RewardMode reward_mode = RewardMode::Shaped;
  bool share_encoder = false;
  double grad_clip = 0.5;
  std::vector<int> hidden = {512, 256};
};

/// One collected step of an on-policy rollout, together with the acting
/// policy's log-prob and value at collection time.
struct RolloutStep {
  Transition t;
  float log_prob = 0.0f;
  float value = 0.0f;
};

/// Per-worker time-ordered rollout sequences. Keeping workers separate
/// preserves the trajectory structure GAE needs.
struct Rollout {
  std::vector<std::vector<RolloutStep>> workers;

  size_t size() const {
    size_t n = 0;
    for (const auto& w : workers) n += w.size();
    return n;
  }
};

/// Clipped-surrogate PPO with categorical policy, GAE and optional shared
/// encoder between the actor and critic.
class PpoAgent {
 public:
  PpoAgent(int obs_size, int n_actions, const PpoConfig& cfg, Rng& init_rng);

  struct ActResult {
    int action = 0;
    float log_prob = 0.0f;
    float value = 0.0f;
  };

  ActResult act(std::span<const float> obs, Rng& rng) const;
  /// Distribution mode; used for evaluation.
  int act_mode(std::span<const float> obs) const;
  float value(std::span<const float> obs) const;

  struct UpdateStats {
    double loss_policy = 0.0;
    double loss_value = 0.0;
    double entropy = 0.0;
  };

  /// Full PPO update on one rollout: GAE per trajectory segment (episode
  /// ends, timeouts and phase hand-offs all cut segments; only true
  /// termination zeroes the bootstrap), advantages normalised over the
  /// whole batch, then `epochs` passes of shuffled minibatch steps with the
  /// gradient clipped by global norm.
  UpdateStats update(const envs::Env& env, const Rollout& rollout, Rng& shuffle_rng);

  const PpoConfig& config() const { return cfg_; }
  const neural::Mlp<float>& actor() const { return actor_; }
  const neural::Mlp<float>& critic() const { return critic_; }
  const neural::Mlp<float>& trunk() const { return trunk_; }
  neural::Mlp<float>& actor() { return actor_; }
  neural::Mlp<float>& critic() { return critic_; }

 private:
  void policy_value(std::span<const float> obs, std::vector<float>& logits,
                    float& value) const;
  float reward_of(const Transition& t) const;

  PpoConfig cfg_;
  bool shared_;
  // shared_ == false: actor_ and critic_ are full networks on the raw
  // observation. shared_ == true: trunk_ embeds the observation (rectified
  // output) and actor_/critic_ are single linear heads on the features.
  neural::Mlp<float> trunk_, actor_, critic_;
  neural::Adam<float> adam_trunk_, adam_actor_, adam_critic_;
  neural::Grads<float> g_trunk_, g_actor_, g_critic_;
  mutable std::vector<float> scratch_feat_, scratch_logits_, scratch_value_;
};

}  // namespace explorego::agents
