#include "explorego/collector/collector.hpp"

#include "explorego/check.hpp"

namespace explorego::collector {

int sample_k(Rng& rng, int max_pure_steps) {
  check(max_pure_steps >= 0, "sample_k needs a non-negative K");
  return static_cast<int>(rng.uniform_int(static_cast<uint64_t>(max_pure_steps) + 1));
}

EnvWorker::EnvWorker(const envs::Env& env, const envs::ContextSet& train,
                     explore::GlobalCounts& counts_in, Rng rng_stream, int index_in,
                     const ExploreGoConfig& cfg)
    : index(index_in), counts(counts_in), rng(rng_stream) {
  begin_episode(env, train, cfg);
}

void EnvWorker::begin_episode(const envs::Env& env, const envs::ContextSet& train,
                              const ExploreGoConfig& cfg) {
  check(!train.contexts.empty(), "worker needs a non-empty train context set");
  const auto& ctx = train.contexts[rng.uniform_int(train.contexts.size())];
  state = env.initial_state(ctx);
  episode_step = 0;
  counts.reset_episode();
  k = cfg.enabled ? sample_k(rng, cfg.max_pure_steps) : 0;
}

void tee_wire(std::vector<EnvWorker>& workers, const explore::BetaSchedule& schedule) {
  check_config(static_cast<int>(workers.size()) == schedule.workers,
               "tee schedule worker count does not match the vectorised env count");
  const auto betas = explore::tee_betas(schedule);
  for (size_t i = 0; i < workers.size(); ++i) workers[i].tee_beta = betas[i];
}

RolloutCollector::RolloutCollector(const envs::Env& env, const envs::ContextSet& train,
                                   ExploreGoConfig cfg, std::vector<EnvWorker>* workers,
                                   metrics::VisitedSet* visited)
    : env_(env), train_(train), cfg_(cfg), workers_(workers), visited_(visited) {
  check(workers != nullptr && !workers->empty(), "collector needs workers");
  obs_buf_.resize(static_cast<size_t>(env.obs_shape().size()));
}

EnvWorker& RolloutCollector::next_worker() {
  EnvWorker& w = (*workers_)[cursor_];
  cursor_ = (cursor_ + 1) % workers_->size();
  return w;
}

int RolloutCollector::pe_action(EnvWorker& w, agents::DqnAgent* dqn,
                                agents::PpoAgent* pure_agent,
                                agents::PpoAgent::ActResult* pure_act) {
  switch (cfg_.pe_policy) {
    case PePolicy::Uniform:
      return explore::pure_policy_uniform(w.rng, env_.action_count());
    case PePolicy::UGreedy:
      check(dqn != nullptr, "u_greedy pure-exploration policy needs a DQN agent");
      dqn->u_values(obs_buf_, u_buf_);
      return explore::pure_policy_ugreedy(u_buf_, explore::kPureExplorationEpsilon,
                                          w.rng);
    case PePolicy::PurePpo:
      check(pure_agent != nullptr,
            "pure_ppo pure-exploration policy needs a parallel PPO agent");
      *pure_act = pure_agent->act(obs_buf_, w.rng);
      return pure_act->action;
  }
  return 0;
}

std::vector<Transition> RolloutCollector::collect_offpolicy(agents::DqnAgent& agent,
                                                            int n_steps,
                                                            StepClock& clock) {
  check(n_steps >= 1, "collect_offpolicy needs a positive step budget");
  std::vector<Transition> out;
  out.reserve(static_cast<size_t>(n_steps));

  int collected = 0;
  while (collected < n_steps) {
    EnvWorker& w = next_worker();
    const bool in_pe = w.in_pure_phase(cfg_);
    env_.encode(w.state, obs_buf_);

    int action;
    if (in_pe) {
      action = pe_action(w, &agent, nullptr, nullptr);
    } else {
      const float eps = agent.epsilon_at(clock.env_steps, clock.budget);
      const float beta = static_cast<float>(w.tee_beta.value_or(agent.config().beta));
      action = agent.act(obs_buf_, eps, beta, w.rng);
    }

    const auto result = env_.step(w.state, action);
    const float eta = w.counts.observe_and_reward(w.state, action);
    if (visited_ != nullptr) visited_->add(w.state, action);
    ++w.episode_step;
    const bool truncated = !result.done && w.episode_step >= env_.timeout();

    Transition t;
    t.state = w.state;
    t.action = action;
    t.reward = result.reward;
    t.intrinsic = eta;
    t.next_state = result.next;
    t.done = result.done;
    t.truncated = truncated;
    t.pure_exploration = in_pe;

    // The agent trains only on post-phase experience; the phase's
    // transitions neither count toward the budget nor reach the buffer
    // unless the include_pe ablation asks for them.
    if (!in_pe) {
      out.push_back(t);
      ++collected;
    } else if (cfg_.include_pe) {
      out.push_back(t);
    }

    ++clock.env_steps;
    w.state = result.next;
    if (result.done || truncated) w.begin_episode(env_, train_, cfg_);
  }
  return out;
}

RolloutCollector::OnPolicyResult RolloutCollector::collect_onpolicy(
    agents::PpoAgent& main, agents::PpoAgent* pure_agent, int total_steps,
    StepClock& clock) {
  check(total_steps >= 1, "collect_onpolicy needs a positive step budget");
  OnPolicyResult out;
  out.main.workers.resize(workers_->size());
  out.pure.workers.resize(workers_->size());

  for (int step = 0; step < total_steps; ++step) {
    EnvWorker& w = next_worker();
    const bool in_pe = w.in_pure_phase(cfg_);
    env_.encode(w.state, obs_buf_);

    agents::PpoAgent::ActResult acted{};
    if (in_pe) {
      acted.action = pe_action(w, nullptr, pure_agent, &acted);
    } else {
      acted = main.act(obs_buf_, w.rng);
    }

    const auto result = env_.step(w.state, acted.action);
    const float eta = w.counts.observe_and_reward(w.state, acted.action);
    if (visited_ != nullptr) visited_->add(w.state, acted.action);
    ++w.episode_step;
    const bool truncated = !result.done && w.episode_step >= env_.timeout();

    agents::RolloutStep rs;
    rs.t.state = w.state;
    rs.t.action = acted.action;
    rs.t.reward = result.reward;
    rs.t.intrinsic = eta;
    rs.t.next_state = result.next;
    rs.t.done = result.done;
    rs.t.truncated = truncated;
    rs.t.pure_exploration = in_pe;
    rs.log_prob = acted.log_prob;
    rs.value = acted.value;

    if (in_pe) {
      out.pure.workers[w.index].push_back(rs);
      ++out.pure_steps;
    } else {
      out.main.workers[w.index].push_back(rs);
    }

    ++clock.env_steps;
    w.state = result.next;
    if (result.done || truncated) w.begin_episode(env_, train_, cfg_);
  }
  return out;
}

size_t inject_random_transitions(agents::ReplayBuffer& buffer,
                                 const oracle::ReachableSet& reachable,
                                 const envs::Env& env, Rng& rng, double fraction,
                                 size_t n_real, metrics::VisitedSet* visited) {
  check(fraction >= 0.0 && fraction < 1.0, "inject fraction outside [0,1)");
  const size_t count = static_cast<size_t>(fraction * static_cast<double>(n_real));
  for (size_t i = 0; i < count; ++i) {
    Transition t = oracle::sample_random_transition(rng, reachable, env);
    if (visited != nullptr) visited->add(t.state, t.action);
    buffer.push(std::move(t));
  }
  return count;
}

}  // namespace explorego::collector
