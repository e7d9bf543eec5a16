#include "explorego/cli/trainer.hpp"

#include <fstream>
#include <nlohmann/json.hpp>

#include "explorego/agents/dqn.hpp"
#include "explorego/agents/ppo.hpp"
#include "explorego/agents/replay.hpp"
#include "explorego/check.hpp"
#include "explorego/collector/collector.hpp"
#include "explorego/envs/cross.hpp"
#include "explorego/envs/four_rooms.hpp"
#include "explorego/explore/counts.hpp"
#include "explorego/metrics/metrics.hpp"

namespace explorego::cli {

using nlohmann::json;

Experiment build_experiment(const RunConfig& cfg) {
  Experiment ex;
  ex.gamma = cfg.algo.name == "dqn" ? cfg.dqn.gamma : cfg.ppo.gamma;
  if (cfg.env.name == "illustrative") {
    ex.env = std::make_unique<envs::CrossEnv>();
    auto [train, test] = envs::gen_cross_context_sets();
    ex.train = std::move(train);
    ex.unreachable_test = std::move(test);
    ex.reachable_test.kind = envs::ContextSetKind::ReachableTest;
  } else {
    ex.env = std::make_unique<envs::FourRoomsEnv>(cfg.env.grid_size);
    auto sets = envs::gen_fourrooms_context_sets(cfg.contexts.master_seed,
                                                 cfg.contexts.n_train,
                                                 cfg.contexts.n_test, cfg.env.grid_size);
    ex.train = std::move(sets.train);
    ex.reachable_test = std::move(sets.reachable_test);
    ex.unreachable_test = std::move(sets.unreachable_test);
  }
  ex.reachable = oracle::enumerate_reachable(*ex.env, ex.train);
  ex.tables = oracle::value_iteration(*ex.env, ex.reachable, ex.gamma);
  return ex;
}

namespace {

json mlp_to_json(const neural::Mlp<float>& net) {
  json layers = json::array();
  std::vector<int> sizes;
  for (const auto& l : net.layers) {
    if (sizes.empty()) sizes.push_back(l.in);
    sizes.push_back(l.out);
    layers.push_back({{"w", l.w}, {"b", l.b}});
  }
  return {{"sizes", sizes}, {"relu_output", net.relu_output}, {"layers", layers}};
}

struct LossAccum {
  double loss_q = 0, loss_u = 0, loss_policy = 0, loss_value = 0, entropy = 0;
  uint64_t updates = 0;
  uint64_t pe_steps = 0, env_steps = 0;

  void reset() { *this = LossAccum{}; }
};

class MetricSink {
 public:
  MetricSink(std::ostream& out, uint64_t seed) : writer_(out), seed_(seed) {}

  void row(uint64_t step, const char* split, const char* metric, double value) {
    writer_.append({step, seed_, split, metric, value});
  }

 private:
  metrics::CsvWriter writer_;
  uint64_t seed_;
};

void eval_split(MetricSink& sink, uint64_t step, const char* split,
                const Experiment& ex, const metrics::GreedyPolicy& policy,
                const envs::ContextSet& contexts, int episodes, Rng& rng) {
  if (contexts.contexts.empty()) return;
  const auto r = metrics::evaluate(*ex.env, policy, contexts, episodes, ex.gamma, rng);
  sink.row(step, split, "success_rate", r.success_rate);
  sink.row(step, split, "mean_return", r.mean_return);
  sink.row(step, split, "mean_disc_return", r.mean_disc_return);
}

}  // namespace

void run_experiment(const RunConfig& cfg, uint64_t seed,
                    const std::filesystem::path& out_dir) {
  validate(cfg);
  const Experiment ex = build_experiment(cfg);

  std::filesystem::create_directories(out_dir);
  {
    std::ofstream echo(out_dir / "config.json");
    check_config(echo.good(), "cannot write config echo in " + out_dir.string());
    echo << echo_config(cfg).dump(2) << '\n';
  }
  std::ofstream csv_out(out_dir / ("metrics_seed" + std::to_string(seed) + ".csv"));
  check_config(csv_out.good(), "cannot write metrics CSV in " + out_dir.string());
  MetricSink sink(csv_out, seed);

  explore::GlobalCounts counts;
  metrics::VisitedSet visited;
  std::vector<collector::EnvWorker> workers;
  workers.reserve(cfg.train.n_envs);
  for (int i = 0; i < cfg.train.n_envs; ++i)
    workers.emplace_back(*ex.env, ex.train, counts, Rng(derive_seed(seed, "worker", i)),
                         i, cfg.explorego);
  if (cfg.tee.enabled)
    collector::tee_wire(workers, {cfg.tee.phi, cfg.tee.lambda, cfg.tee.alpha,
                                  cfg.train.n_envs});

  collector::RolloutCollector collector(*ex.env, ex.train, cfg.explorego, &workers,
                                        &visited);
  collector::StepClock clock{0, cfg.train.total_steps};
  Rng eval_rng(derive_seed(seed, "eval", 0));
  LossAccum acc;

  const int n_actions = ex.env->action_count();
  const int obs_size = ex.env->obs_shape().size();

  std::unique_ptr<agents::DqnAgent> dqn;
  std::unique_ptr<agents::ReplayBuffer> buffer;
  std::unique_ptr<agents::PpoAgent> ppo;
  std::unique_ptr<agents::PpoAgent> pure_ppo;
  Rng init_rng(derive_seed(seed, "init", 0));
  if (cfg.algo.name == "dqn") {
    dqn = std::make_unique<agents::DqnAgent>(obs_size, n_actions, cfg.dqn, init_rng);
    buffer = std::make_unique<agents::ReplayBuffer>(cfg.dqn.buffer);
  } else {
    agents::PpoConfig main_cfg = cfg.ppo;
    // Under Explore-Go the main agent trains on raw extrinsic rewards; the
    // intrinsic signal drives only the pure-exploration policy.
    main_cfg.reward_mode = cfg.explorego.enabled ? agents::RewardMode::Extrinsic
                                                 : agents::RewardMode::Shaped;
    ppo = std::make_unique<agents::PpoAgent>(obs_size, n_actions, main_cfg, init_rng);
    if (cfg.explorego.enabled &&
        cfg.explorego.pe_policy == collector::PePolicy::PurePpo) {
      agents::PpoConfig pure_cfg = cfg.ppo;
      pure_cfg.reward_mode = agents::RewardMode::PureIntrinsic;
      pure_cfg.beta = cfg.explorego.beta_pure;
      Rng pure_init(derive_seed(seed, "init", 1));
      pure_ppo = std::make_unique<agents::PpoAgent>(obs_size, n_actions, pure_cfg,
                                                    pure_init);
    }
  }

  metrics::GreedyPolicy policy;
  if (dqn)
    policy = [&](std::span<const float> obs) { return dqn->act_greedy(obs); };
  else
    policy = [&](std::span<const float> obs) { return ppo->act_mode(obs); };

  auto record = [&](uint64_t at_step) {
    eval_split(sink, at_step, "train", ex, policy, ex.train, cfg.train.eval_episodes,
               eval_rng);
    eval_split(sink, at_step, "test_reachable", ex, policy, ex.reachable_test,
               cfg.train.eval_episodes, eval_rng);
    eval_split(sink, at_step, "test_unreachable", ex, policy, ex.unreachable_test,
               cfg.train.eval_episodes, eval_rng);
    sink.row(at_step, "global", "coverage_sa",
             metrics::coverage(visited, ex.reachable, n_actions));
    const double denom = acc.updates > 0 ? static_cast<double>(acc.updates) : 1.0;
    if (dqn) {
      sink.row(at_step, "global", "buffer_diversity",
               metrics::buffer_diversity(*buffer, ex.reachable));
      sink.row(at_step, "global", "value_error",
               metrics::value_error(*ex.env, dqn->q_net(), ex.tables, ex.reachable));
      sink.row(at_step, "global", "loss_q", acc.loss_q / denom);
      sink.row(at_step, "global", "loss_u", acc.loss_u / denom);
    } else {
      sink.row(at_step, "global", "loss_policy", acc.loss_policy / denom);
      sink.row(at_step, "global", "loss_value", acc.loss_value / denom);
      sink.row(at_step, "global", "entropy", acc.entropy / denom);
    }
    sink.row(at_step, "global", "pe_fraction",
             acc.env_steps > 0 ? static_cast<double>(acc.pe_steps) / acc.env_steps : 0.0);
    acc.reset();
  };

  uint64_t next_eval = 0;
  uint64_t last_recorded = UINT64_MAX;
  auto maybe_record = [&]() {
    while (next_eval <= clock.env_steps && next_eval <= clock.budget) {
      record(next_eval);
      last_recorded = next_eval;
      next_eval += cfg.train.eval_every;
    }
  };
  maybe_record();  // step-0 row

  if (dqn) {
    Rng inject_rng(derive_seed(seed, "inject", 0));
    Rng replay_rng(derive_seed(seed, "replay", 0));
    uint64_t last_target = 0;
    while (clock.env_steps < clock.budget) {
      const uint64_t before = clock.env_steps;
      auto round = collector.collect_offpolicy(*dqn, cfg.dqn.train_freq, clock);
      acc.env_steps += clock.env_steps - before;
      acc.pe_steps += (clock.env_steps - before) - cfg.dqn.train_freq;
      size_t n_real = round.size();
      for (auto& t : round) buffer->push(std::move(t));
      if (cfg.inject.enabled)
        collector::inject_random_transitions(*buffer, ex.reachable, *ex.env, inject_rng,
                                             cfg.inject.fraction, n_real, &visited);
      if (buffer->size() >= static_cast<size_t>(cfg.dqn.batch)) {
        const auto batch = buffer->sample(cfg.dqn.batch, replay_rng);
        const auto [loss_q, loss_u] = dqn->update(*ex.env, batch);
        acc.loss_q += loss_q;
        acc.loss_u += loss_u;
        ++acc.updates;
      }
      while (clock.env_steps - last_target >=
             static_cast<uint64_t>(cfg.dqn.target_interval)) {
        dqn->soft_update_targets();
        last_target += cfg.dqn.target_interval;
      }
      maybe_record();
    }
  } else {
    Rng shuffle_rng(derive_seed(seed, "shuffle", 0));
    Rng pure_shuffle_rng(derive_seed(seed, "shuffle", 1));
    while (clock.env_steps < clock.budget) {
      const uint64_t before = clock.env_steps;
      auto result = collector.collect_onpolicy(*ppo, pure_ppo.get(),
                                               cfg.ppo.rollout_steps, clock);
      acc.env_steps += clock.env_steps - before;
      acc.pe_steps += result.pure_steps;
      if (result.main.size() > 0) {
        const auto stats = ppo->update(*ex.env, result.main, shuffle_rng);
        acc.loss_policy += stats.loss_policy;
        acc.loss_value += stats.loss_value;
        acc.entropy += stats.entropy;
        ++acc.updates;
      }
      if (pure_ppo && result.pure.size() > 0)
        pure_ppo->update(*ex.env, result.pure, pure_shuffle_rng);
      maybe_record();
    }
  }

  if (last_recorded != clock.budget) record(clock.budget);

  json checkpoint;
  checkpoint["format_version"] = 1;
  checkpoint["algo"] = cfg.algo.name;
  if (dqn) {
    checkpoint["nets"] = {{"q", mlp_to_json(dqn->q_net())},
                          {"u", mlp_to_json(dqn->u_net())}};
  } else {
    json nets = {{"actor", mlp_to_json(ppo->actor())},
                 {"critic", mlp_to_json(ppo->critic())}};
    if (cfg.ppo.share_encoder) nets["trunk"] = mlp_to_json(ppo->trunk());
    checkpoint["nets"] = std::move(nets);
    if (pure_ppo) {
      json pure = {{"actor", mlp_to_json(pure_ppo->actor())},
                   {"critic", mlp_to_json(pure_ppo->critic())}};
      if (cfg.ppo.share_encoder) pure["trunk"] = mlp_to_json(pure_ppo->trunk());
      checkpoint["pure_exploration_nets"] = std::move(pure);
    }
  }
  std::ofstream ckpt(out_dir / ("checkpoint_seed" + std::to_string(seed) + ".json"));
  ckpt << checkpoint.dump() << '\n';
}

}  // namespace explorego::cli
