#include "explorego/agents/ppo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace explorego::agents {

namespace {

std::vector<int> full_sizes(int obs_size, const std::vector<int>& hidden, int out) {
  std::vector<int> sizes;
  sizes.push_back(obs_size);
  sizes.insert(sizes.end(), hidden.begin(), hidden.end());
  sizes.push_back(out);
  return sizes;
}

}  // namespace

PpoAgent::PpoAgent(int obs_size, int n_actions, const PpoConfig& cfg, Rng& init_rng)
    : cfg_(cfg), shared_(cfg.share_encoder) {
  check(!cfg.hidden.empty(), "ppo needs at least one hidden layer");
  if (shared_) {
    std::vector<int> trunk_sizes;
    trunk_sizes.push_back(obs_size);
    trunk_sizes.insert(trunk_sizes.end(), cfg.hidden.begin(), cfg.hidden.end());
    trunk_ = neural::Mlp<float>::make(trunk_sizes, init_rng, 1.0f, /*relu_output=*/true);
    actor_ = neural::Mlp<float>::make({cfg.hidden.back(), n_actions}, init_rng, 0.01f);
    critic_ = neural::Mlp<float>::make({cfg.hidden.back(), 1}, init_rng);
    adam_trunk_.lr = static_cast<float>(cfg.lr);
    adam_trunk_.eps = static_cast<float>(cfg.adam_eps);
    adam_trunk_.init_like(trunk_);
    g_trunk_.init_like(trunk_);
  } else {
    actor_ = neural::Mlp<float>::make(full_sizes(obs_size, cfg.hidden, n_actions),
                                      init_rng, 0.01f);
    critic_ = neural::Mlp<float>::make(full_sizes(obs_size, cfg.hidden, 1), init_rng);
  }
  adam_actor_.lr = static_cast<float>(cfg.lr);
  adam_actor_.eps = static_cast<float>(cfg.adam_eps);
  adam_actor_.init_like(actor_);
  adam_critic_.lr = static_cast<float>(cfg.lr);
  adam_critic_.eps = static_cast<float>(cfg.adam_eps);
  adam_critic_.init_like(critic_);
  g_actor_.init_like(actor_);
  g_critic_.init_like(critic_);
}

void PpoAgent::policy_value(std::span<const float> obs, std::vector<float>& logits,
                            float& value) const {
  if (shared_) {
    neural::forward<float>(trunk_, obs, scratch_feat_);
    neural::forward<float>(actor_, scratch_feat_, logits);
    neural::forward<float>(critic_, scratch_feat_, scratch_value_);
  } else {
    neural::forward<float>(actor_, obs, logits);
    neural::forward<float>(critic_, obs, scratch_value_);
  }
  value = scratch_value_[0];
}

PpoAgent::ActResult PpoAgent::act(std::span<const float> obs, Rng& rng) const {
  ActResult r;
  policy_value(obs, scratch_logits_, r.value);
  const auto dist = neural::Categorical<float>::from_logits(scratch_logits_);
  r.action = dist.sample(rng);
  r.log_prob = dist.log_prob(r.action);
  return r;
}

int PpoAgent::act_mode(std::span<const float> obs) const {
  float value = 0.0f;
  policy_value(obs, scratch_logits_, value);
  const auto dist = neural::Categorical<float>::from_logits(scratch_logits_);
  return dist.mode();
}

float PpoAgent::value(std::span<const float> obs) const {
  float v = 0.0f;
  policy_value(obs, scratch_logits_, v);
  return v;
}

float PpoAgent::reward_of(const Transition& t) const {
  switch (cfg_.reward_mode) {
    case RewardMode::Extrinsic: return t.reward;
    case RewardMode::Shaped:
      return t.reward + static_cast<float>(cfg_.beta) * t.intrinsic;
    case RewardMode::PureIntrinsic:
      return static_cast<float>(cfg_.beta) * t.intrinsic;
  }
  return t.reward;
}

PpoAgent::UpdateStats PpoAgent::update(const envs::Env& env, const Rollout& rollout,
                                       Rng& shuffle_rng) {
  if (cfg_.reward_mode == RewardMode::PureIntrinsic) {
    for (const auto& worker : rollout.workers)
      for (const auto& step : worker)
        check(step.t.pure_exploration,
              "pure-exploration agent trained on an unflagged transition");
  }

  struct Sample {
    const Transition* t;
    float old_log_prob, advantage, ret;
  };
  std::vector<Sample> samples;
  samples.reserve(rollout.size());

  // GAE per contiguous trajectory segment. A segment ends at an episode
  // boundary or wherever the stored successor does not match the next
  // step's state (phase hand-offs, rollout cut). Only termination zeroes
  // the bootstrap; everything else bootstraps through the critic.
  const neural::GaeParams gae_params{cfg_.gamma, cfg_.gae_lambda};
  std::vector<float> rewards, values, advantages, returns, obs;
  std::vector<uint8_t> dones;
  obs.resize(static_cast<size_t>(env.obs_shape().size()));
  for (const auto& worker : rollout.workers) {
    size_t start = 0;
    while (start < worker.size()) {
      size_t end = start;
      while (end + 1 < worker.size() && !worker[end].t.done && !worker[end].t.truncated &&
             worker[end + 1].t.state == worker[end].t.next_state)
        ++end;
      const size_t n = end - start + 1;
      rewards.resize(n);
      values.resize(n);
      dones.resize(n);
      for (size_t i = 0; i < n; ++i) {
        const auto& step = worker[start + i];
        rewards[i] = reward_of(step.t);
        values[i] = step.value;
        dones[i] = step.t.done ? 1 : 0;
      }
      float bootstrap = 0.0f;
      if (!worker[end].t.done) {
        env.encode(worker[end].t.next_state, obs);
        bootstrap = value(obs);
      }
      neural::gae<float>(rewards, values, dones, bootstrap, gae_params, advantages,
                         returns);
      for (size_t i = 0; i < n; ++i) {
        const auto& step = worker[start + i];
        samples.push_back({&step.t, step.log_prob, advantages[i], returns[i]});
      }
      start = end + 1;
    }
  }
  check(!samples.empty(), "ppo_update on an empty rollout");

  // Normalise advantages over the whole update batch.
  double mean = 0.0;
  for (const auto& s : samples) mean += s.advantage;
  mean /= samples.size();
  double var = 0.0;
  for (const auto& s : samples) var += (s.advantage - mean) * (s.advantage - mean);
  const double std_dev = std::sqrt(var / samples.size());
  for (auto& s : samples)
    s.advantage = static_cast<float>((s.advantage - mean) / (std_dev + 1e-8));

  const int n = static_cast<int>(samples.size());
  const int n_minibatches =
      cfg_.minibatches > 0
          ? cfg_.minibatches
          : std::max(1, (n + cfg_.minibatch_size - 1) / cfg_.minibatch_size);

  std::vector<int> order(samples.size());
  std::iota(order.begin(), order.end(), 0);

  UpdateStats stats;
  size_t stat_count = 0;
  const float clip = static_cast<float>(cfg_.clip);

  neural::Cache<float> cache_trunk, cache_actor, cache_critic;
  std::vector<float> logits, dlogits, dvalue, dfeat, dfeat_critic;

  for (int epoch = 0; epoch < cfg_.epochs; ++epoch) {
    // Fisher-Yates on the caller's stream keeps runs reproducible.
    for (size_t i = order.size(); i > 1; --i)
      std::swap(order[i - 1], order[shuffle_rng.uniform_int(i)]);

    for (int mb = 0; mb < n_minibatches; ++mb) {
      const int lo = static_cast<int>(static_cast<long>(n) * mb / n_minibatches);
      const int hi = static_cast<int>(static_cast<long>(n) * (mb + 1) / n_minibatches);
      if (hi == lo) continue;
      const float inv_m = 1.0f / static_cast<float>(hi - lo);

      g_actor_.zero();
      g_critic_.zero();
      if (shared_) g_trunk_.zero();
      double mb_policy = 0.0, mb_value = 0.0, mb_entropy = 0.0;

      for (int idx = lo; idx < hi; ++idx) {
        const Sample& s = samples[order[idx]];
        env.encode(s.t->state, obs);

        float v_pred = 0.0f;
        if (shared_) {
          neural::forward<float>(trunk_, obs, scratch_feat_, &cache_trunk);
          neural::forward<float>(actor_, scratch_feat_, logits, &cache_actor);
          neural::forward<float>(critic_, scratch_feat_, scratch_value_, &cache_critic);
        } else {
          neural::forward<float>(actor_, obs, logits, &cache_actor);
          neural::forward<float>(critic_, obs, scratch_value_, &cache_critic);
        }
        v_pred = scratch_value_[0];

        const auto dist = neural::Categorical<float>::from_logits(logits);
        const int a = s.t->action;
        const float logp = dist.log_prob(a);
        const float ratio = std::exp(logp - s.old_log_prob);
        const float unclipped = ratio * s.advantage;
        const float clipped = std::clamp(ratio, 1.0f - clip, 1.0f + clip) * s.advantage;
        const float surrogate = std::min(unclipped, clipped);
        const float entropy = dist.entropy();
        const float v_err = v_pred - s.ret;

        mb_policy += -double(surrogate);
        mb_value += double(v_err) * double(v_err);
        mb_entropy += double(entropy);

        // d(-surrogate)/dlogp: gradient flows only through the branch the
        // min selects; the clipped branch is flat in the clipping region.
        float dsurr_dlogp = 0.0f;
        if (unclipped <= clipped) dsurr_dlogp = unclipped;

        dlogits.assign(logits.size(), 0.0f);
        for (size_t k = 0; k < logits.size(); ++k) {
          const float onehot = (static_cast<int>(k) == a) ? 1.0f : 0.0f;
          const float dlogp_dz = onehot - dist.probs[k];
          const float dentropy_dz = -dist.probs[k] * (dist.logp[k] + entropy);
          dlogits[k] = inv_m * (-dsurr_dlogp * dlogp_dz -
                                static_cast<float>(cfg_.entropy_coeff) * dentropy_dz);
        }
        dvalue.assign(1, inv_m * static_cast<float>(cfg_.vf_coeff) * 2.0f * v_err);

        if (shared_) {
          neural::backward<float>(actor_, cache_actor, dlogits, g_actor_, &dfeat);
          neural::backward<float>(critic_, cache_critic, dvalue, g_critic_,
                                  &dfeat_critic);
          for (size_t k = 0; k < dfeat.size(); ++k) dfeat[k] += dfeat_critic[k];
          neural::backward<float>(trunk_, cache_trunk, dfeat, g_trunk_);
        } else {
          neural::backward<float>(actor_, cache_actor, dlogits, g_actor_);
          neural::backward<float>(critic_, cache_critic, dvalue, g_critic_);
        }
      }

      if (shared_) {
        neural::Grads<float>* all[] = {&g_trunk_, &g_actor_, &g_critic_};
        neural::clip_global_norm(std::span<neural::Grads<float>* const>(all),
                                 static_cast<float>(cfg_.grad_clip));
        adam_trunk_.update(trunk_, g_trunk_);
      } else {
        neural::Grads<float>* all[] = {&g_actor_, &g_critic_};
        neural::clip_global_norm(std::span<neural::Grads<float>* const>(all),
                                 static_cast<float>(cfg_.grad_clip));
      }
      adam_actor_.update(actor_, g_actor_);
      adam_critic_.update(critic_, g_critic_);

      stats.loss_policy += mb_policy / (hi - lo);
      stats.loss_value += mb_value / (hi - lo);
      stats.entropy += mb_entropy / (hi - lo);
      ++stat_count;
    }
  }

  if (stat_count > 0) {
    stats.loss_policy /= static_cast<double>(stat_count);
    stats.loss_value /= static_cast<double>(stat_count);
    stats.entropy /= static_cast<double>(stat_count);
  }
  return stats;
}

}  // namespace explorego::agents
