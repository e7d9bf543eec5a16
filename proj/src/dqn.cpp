#include "explorego/agents/dqn.hpp"

#include <algorithm>

namespace explorego::agents {

namespace {

std::vector<int> layer_sizes(int obs_size, const std::vector<int>& hidden, int out) {
  std::vector<int> sizes;
  sizes.reserve(hidden.size() + 2);
  sizes.push_back(obs_size);
  sizes.insert(sizes.end(), hidden.begin(), hidden.end());
  sizes.push_back(out);
  return sizes;
}

int argmax_lowest(std::span<const float> v) {
  int best = 0;
  for (int i = 1; i < static_cast<int>(v.size()); ++i)
    if (v[i] > v[best]) best = i;
  return best;
}

}  // namespace

DqnAgent::DqnAgent(int obs_size, int n_actions, const DqnConfig& cfg, Rng& init_rng)
    : cfg_(cfg) {
  const auto sizes = layer_sizes(obs_size, cfg.hidden, n_actions);
  q_ = neural::Mlp<float>::make(sizes, init_rng);
  u_ = neural::Mlp<float>::make(sizes, init_rng);
  q_target_ = q_;
  u_target_ = u_;
  adam_q_.lr = static_cast<float>(cfg.lr_q);
  adam_q_.eps = static_cast<float>(cfg.adam_eps);
  adam_q_.init_like(q_);
  adam_u_.lr = static_cast<float>(cfg.lr_u);
  adam_u_.eps = static_cast<float>(cfg.adam_eps);
  adam_u_.init_like(u_);
  grads_q_.init_like(q_);
  grads_u_.init_like(u_);
}

int DqnAgent::act(std::span<const float> obs, float eps, float beta, Rng& rng) const {
  check(eps >= 0.0f && eps <= 1.0f, "dqn_act epsilon outside [0,1]");
  if (eps > 0.0f && rng.next_float() < eps)
    return static_cast<int>(rng.uniform_int(q_.output_size()));
  neural::forward<float>(q_, obs, scratch_q_);
  if (beta != 0.0f) {
    neural::forward<float>(u_, obs, scratch_u_);
    for (size_t i = 0; i < scratch_q_.size(); ++i)
      scratch_q_[i] += beta * scratch_u_[i];
  }
  return argmax_lowest(scratch_q_);
}

int DqnAgent::act_greedy(std::span<const float> obs) const {
  neural::forward<float>(q_, obs, scratch_q_);
  return argmax_lowest(scratch_q_);
}

void DqnAgent::u_values(std::span<const float> obs, std::vector<float>& out) const {
  neural::forward<float>(u_, obs, out);
}

std::pair<double, double> DqnAgent::update(const envs::Env& env,
                                           std::span<const Transition* const> batch) {
  check(!batch.empty(), "dqn_update on an empty batch");
  const float gamma = static_cast<float>(cfg_.gamma);
  const float inv_n = 1.0f / static_cast<float>(batch.size());

  grads_q_.zero();
  grads_u_.zero();
  double loss_q = 0.0, loss_u = 0.0;

  neural::Cache<float> cache_q, cache_u;
  std::vector<float> pred, next_vals, dy;
  std::vector<float>& obs = scratch_obs_;
  std::vector<float> next_obs;
  obs.resize(static_cast<size_t>(env.obs_shape().size()));
  next_obs.resize(obs.size());

  for (const Transition* t : batch) {
    env.encode(t->state, obs);
    env.encode(t->next_state, next_obs);
    const float not_done = t->done ? 0.0f : 1.0f;

    neural::forward<float>(q_target_, next_obs, next_vals);
    const float y_q = t->reward + gamma * not_done * *std::max_element(next_vals.begin(), next_vals.end());
    neural::forward<float>(q_, obs, pred, &cache_q);
    const float err_q = pred[t->action] - y_q;
    loss_q += double(err_q) * double(err_q);
    dy.assign(pred.size(), 0.0f);
    dy[t->action] = 2.0f * err_q * inv_n;
    neural::backward<float>(q_, cache_q, dy, grads_q_);

    neural::forward<float>(u_target_, next_obs, next_vals);
    const float y_u = t->intrinsic + gamma * not_done * *std::max_element(next_vals.begin(), next_vals.end());
    neural::forward<float>(u_, obs, pred, &cache_u);
    const float err_u = pred[t->action] - y_u;
    loss_u += double(err_u) * double(err_u);
    dy.assign(pred.size(), 0.0f);
    dy[t->action] = 2.0f * err_u * inv_n;
    neural::backward<float>(u_, cache_u, dy, grads_u_);
  }

  neural::clip_global_norm(grads_q_, static_cast<float>(cfg_.grad_clip));
  neural::clip_global_norm(grads_u_, static_cast<float>(cfg_.grad_clip));
  adam_q_.update(q_, grads_q_);
  adam_u_.update(u_, grads_u_);

  return {loss_q / batch.size(), loss_u / batch.size()};
}

void DqnAgent::soft_update_targets() {
  neural::soft_update(q_target_, q_, static_cast<float>(cfg_.tau_q));
  neural::soft_update(u_target_, u_, static_cast<float>(cfg_.tau_u));
}

float DqnAgent::epsilon_at(uint64_t env_steps, uint64_t total_steps) const {
  const double horizon = cfg_.eps_fraction * static_cast<double>(total_steps);
  if (horizon <= 0.0) return static_cast<float>(cfg_.eps_final);
  const double frac = std::min(1.0, static_cast<double>(env_steps) / horizon);
  return static_cast<float>(cfg_.eps_init + frac * (cfg_.eps_final - cfg_.eps_init));
}

}  // namespace explorego::agents
