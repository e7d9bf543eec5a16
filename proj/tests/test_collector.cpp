#include <doctest.h>

#include <cmath>
#include <set>

#include "explorego/collector/collector.hpp"
#include "explorego/envs/cross.hpp"

using namespace explorego;
using namespace explorego::collector;
using namespace explorego::envs;

namespace {

struct Fixture {
  CrossEnv env;
  ContextSet train;
  explore::GlobalCounts counts;
  metrics::VisitedSet visited;
  std::vector<EnvWorker> workers;

  explicit Fixture(const ExploreGoConfig& cfg, int n_envs = 1, uint64_t seed = 42) {
    train = gen_cross_context_sets().first;
    for (int i = 0; i < n_envs; ++i)
      workers.emplace_back(env, train, counts, Rng(derive_seed(seed, "worker", i)), i,
                           cfg);
  }
};

agents::DqnAgent make_dqn(uint64_t seed = 7) {
  agents::DqnConfig cfg;
  cfg.hidden = {16};
  cfg.gamma = 0.9;
  cfg.beta = 0.01;
  Rng init(seed);
  return agents::DqnAgent(75, 4, cfg, init);
}

agents::PpoAgent make_ppo(uint64_t seed = 7) {
  agents::PpoConfig cfg;
  cfg.hidden = {16};
  cfg.gamma = 0.9;
  cfg.minibatch_size = 16;
  Rng init(seed);
  return agents::PpoAgent(75, 4, cfg, init);
}

bool same_transition(const Transition& a, const Transition& b) {
  return a.state == b.state && a.action == b.action && a.reward == b.reward &&
         a.intrinsic == b.intrinsic && a.next_state == b.next_state &&
         a.done == b.done && a.truncated == b.truncated &&
         a.pure_exploration == b.pure_exploration && a.injected == b.injected;
}

}  // namespace

TEST_CASE("sample_k") {
  SUBCASE("K = 0 always yields 0 and consumes no stream state") {
    Rng rng(5), untouched(5);
    for (int i = 0; i < 10; ++i) CHECK(sample_k(rng, 0) == 0);
    CHECK(rng.next_u64() == untouched.next_u64());
  }
  SUBCASE("K = 50: mean within the 3-sigma Monte Carlo bound, full support") {
    Rng rng(91);
    const int n = 100'000;
    double sum = 0;
    std::set<int> seen;
    for (int i = 0; i < n; ++i) {
      const int k = sample_k(rng, 50);
      CHECK(k >= 0);
      CHECK(k <= 50);
      sum += k;
      seen.insert(k);
    }
    CHECK(std::abs(sum / n - 25.0) < 0.2);
    CHECK(seen.size() == 51);
  }
  SUBCASE("negative K is a contract violation") {
    Rng rng(1);
    CHECK_THROWS_AS(sample_k(rng, -1), std::logic_error);
  }
}

TEST_CASE("off-policy collection with K = 0 matches the disabled baseline exactly") {
  ExploreGoConfig off{};
  ExploreGoConfig k0{};
  k0.enabled = true;
  k0.max_pure_steps = 0;
  k0.pe_policy = PePolicy::UGreedy;

  Fixture fa(off, 4), fb(k0, 4);
  auto agent_a = make_dqn(), agent_b = make_dqn();
  RolloutCollector ca(fa.env, fa.train, off, &fa.workers, &fa.visited);
  RolloutCollector cb(fb.env, fb.train, k0, &fb.workers, &fb.visited);
  StepClock clock_a{0, 5000}, clock_b{0, 5000};

  while (clock_a.env_steps < 5000) {
    const auto ra = ca.collect_offpolicy(agent_a, 50, clock_a);
    const auto rb = cb.collect_offpolicy(agent_b, 50, clock_b);
    REQUIRE(ra.size() == rb.size());
    for (size_t i = 0; i < ra.size(); ++i) CHECK(same_transition(ra[i], rb[i]));
  }
  CHECK(clock_a.env_steps == clock_b.env_steps);
}

TEST_CASE("off-policy collection with a pure-exploration phase") {
  ExploreGoConfig cfg{};
  cfg.enabled = true;
  cfg.max_pure_steps = 50;  // longer than the cross timeout: heavy PE share
  cfg.pe_policy = PePolicy::UGreedy;

  SUBCASE("PE transitions are excluded unless the ablation includes them") {
    Fixture f(cfg, 2);
    auto agent = make_dqn();
    RolloutCollector collector(f.env, f.train, cfg, &f.workers, &f.visited);
    StepClock clock{0, 100'000};
    const auto out = collector.collect_offpolicy(agent, 400, clock);
    CHECK(out.size() == 400);
    for (const auto& t : out) CHECK_FALSE(t.pure_exploration);
    // The phase ran: more env steps than returned transitions.
    CHECK(clock.env_steps > 400);
  }
  SUBCASE("include_pe returns flagged PE transitions on top of the budget") {
    ExploreGoConfig with_pe = cfg;
    with_pe.include_pe = true;
    Fixture f(with_pe, 2);
    auto agent = make_dqn();
    RolloutCollector collector(f.env, f.train, with_pe, &f.workers, &f.visited);
    StepClock clock{0, 100'000};
    const auto out = collector.collect_offpolicy(agent, 400, clock);
    CHECK(out.size() == clock.env_steps);
    size_t pe = 0, non_pe = 0;
    for (const auto& t : out) (t.pure_exploration ? pe : non_pe)++;
    CHECK(non_pe == 400);
    CHECK(pe > 0);
    CHECK(pe + non_pe == out.size());
  }
  SUBCASE("within an episode every PE transition precedes every non-PE one") {
    ExploreGoConfig with_pe = cfg;
    with_pe.max_pure_steps = 10;
    with_pe.include_pe = true;
    Fixture f(with_pe, 1);  // single worker: the stream is one episode after another
    auto agent = make_dqn();
    RolloutCollector collector(f.env, f.train, with_pe, &f.workers, &f.visited);
    StepClock clock{0, 100'000};
    const auto out = collector.collect_offpolicy(agent, 2000, clock);
    bool saw_non_pe = false;
    for (const auto& t : out) {
      if (t.pure_exploration) {
        CHECK_FALSE(saw_non_pe);  // the phase is a prefix
      } else {
        saw_non_pe = true;
      }
      if (t.done || t.truncated) saw_non_pe = false;
    }
  }
  SUBCASE("episodic intrinsic reward restarts at episode boundaries") {
    Fixture f(cfg, 1);
    auto agent = make_dqn();
    ExploreGoConfig plain{};
    RolloutCollector collector(f.env, f.train, plain, &f.workers, &f.visited);
    StepClock clock{0, 100'000};
    const auto out = collector.collect_offpolicy(agent, 3000, clock);
    bool episode_start = true;
    for (const auto& t : out) {
      if (episode_start) CHECK(t.intrinsic > 0.0f);  // first visit this episode
      episode_start = t.done || t.truncated;
    }
  }
}

TEST_CASE("explore-go diversifies the effective episode starts") {
  ExploreGoConfig cfg{};
  cfg.enabled = true;
  cfg.max_pure_steps = 8;
  cfg.pe_policy = PePolicy::Uniform;
  cfg.include_pe = true;  // needed to observe the phase boundary
  Fixture f(cfg, 1);
  auto agent = make_dqn();
  RolloutCollector collector(f.env, f.train, cfg, &f.workers, &f.visited);
  StepClock clock{0, 1'000'000};
  const auto out = collector.collect_offpolicy(agent, 20'000, clock);

  const auto [train, test] = gen_cross_context_sets();
  std::set<std::string> context_starts;
  for (const auto& ctx : train.contexts)
    context_starts.insert(f.env.state_key(f.env.initial_state(ctx)));

  // Effective start = the first non-PE state of each episode.
  std::set<std::string> effective_starts;
  bool awaiting_first_non_pe = true;
  for (const auto& t : out) {
    if (!t.pure_exploration && awaiting_first_non_pe) {
      effective_starts.insert(f.env.state_key(t.state));
      awaiting_first_non_pe = false;
    }
    if (t.done || t.truncated) awaiting_first_non_pe = true;
  }
  for (const auto& key : context_starts) CHECK(effective_starts.count(key) == 1);
  CHECK(effective_starts.size() > context_starts.size());
}

TEST_CASE("on-policy collection") {
  SUBCASE("every env step lands in exactly one of the two rollouts") {
    ExploreGoConfig cfg{};
    cfg.enabled = true;
    cfg.max_pure_steps = 8;
    cfg.pe_policy = PePolicy::Uniform;
    Fixture f(cfg, 4);
    auto main = make_ppo();
    RolloutCollector collector(f.env, f.train, cfg, &f.workers, &f.visited);
    StepClock clock{0, 100'000};
    const auto result = collector.collect_onpolicy(main, nullptr, 2000, clock);
    CHECK(result.main.size() + result.pure.size() == 2000);
    CHECK(result.pure.size() == result.pure_steps);
    CHECK(result.pure_steps > 0);
    CHECK(clock.env_steps == 2000);
    for (const auto& w : result.pure.workers)
      for (const auto& s : w) CHECK(s.t.pure_exploration);
    for (const auto& w : result.main.workers)
      for (const auto& s : w) CHECK_FALSE(s.t.pure_exploration);
  }
  SUBCASE("K = 0 matches the disabled baseline bit for bit") {
    ExploreGoConfig off{};
    ExploreGoConfig k0{};
    k0.enabled = true;
    k0.max_pure_steps = 0;
    k0.pe_policy = PePolicy::Uniform;
    Fixture fa(off, 4), fb(k0, 4);
    auto agent_a = make_ppo(), agent_b = make_ppo();
    RolloutCollector ca(fa.env, fa.train, off, &fa.workers, &fa.visited);
    RolloutCollector cb(fb.env, fb.train, k0, &fb.workers, &fb.visited);
    StepClock clock_a{0, 5000}, clock_b{0, 5000};
    while (clock_a.env_steps < 5000) {
      const auto ra = ca.collect_onpolicy(agent_a, nullptr, 200, clock_a);
      const auto rb = cb.collect_onpolicy(agent_b, nullptr, 200, clock_b);
      CHECK(rb.pure_steps == 0);
      REQUIRE(ra.main.workers.size() == rb.main.workers.size());
      for (size_t w = 0; w < ra.main.workers.size(); ++w) {
        REQUIRE(ra.main.workers[w].size() == rb.main.workers[w].size());
        for (size_t i = 0; i < ra.main.workers[w].size(); ++i) {
          CHECK(same_transition(ra.main.workers[w][i].t, rb.main.workers[w][i].t));
          CHECK(ra.main.workers[w][i].log_prob == rb.main.workers[w][i].log_prob);
          CHECK(ra.main.workers[w][i].value == rb.main.workers[w][i].value);
        }
      }
    }
  }
  SUBCASE("PE share per episode stays within the bookkeeping bound") {
    ExploreGoConfig cfg{};
    cfg.enabled = true;
    cfg.max_pure_steps = 8;
    cfg.pe_policy = PePolicy::Uniform;
    Fixture f(cfg, 1);
    auto main = make_ppo();
    RolloutCollector collector(f.env, f.train, cfg, &f.workers, &f.visited);
    StepClock clock{0, 1'000'000};
    const int total = 20'000;
    const auto result = collector.collect_onpolicy(main, nullptr, total, clock);
    // Count episodes across both rollouts.
    size_t episodes = 0;
    auto count_eps = [&](const agents::Rollout& r) {
      for (const auto& w : r.workers)
        for (const auto& s : w)
          if (s.t.done || s.t.truncated) ++episodes;
    };
    count_eps(result.main);
    count_eps(result.pure);
    CHECK(result.pure_steps > 0);
    CHECK(result.pure_steps <=
          static_cast<uint64_t>(cfg.max_pure_steps) * (episodes + 1));
  }
}

TEST_CASE("random-transition injection") {
  CrossEnv env;
  const auto train = gen_cross_context_sets().first;
  const auto reachable = oracle::enumerate_reachable(env, train);
  agents::ReplayBuffer buffer(1000);
  metrics::VisitedSet visited;
  Rng rng(6);

  SUBCASE("fraction 0 injects nothing") {
    CHECK(inject_random_transitions(buffer, reachable, env, rng, 0.0, 50, &visited) == 0);
    CHECK(buffer.size() == 0);
  }
  SUBCASE("floor(fraction * n) transitions, all reachable and flagged") {
    const auto n = inject_random_transitions(buffer, reachable, env, rng, 0.1, 50,
                                             &visited);
    CHECK(n == 5);
    CHECK(buffer.size() == 5);
    for (const auto& t : buffer) {
      CHECK(t.injected);
      CHECK(reachable.contains(t.state));
    }
    CHECK(visited.pair_count() >= 1);
  }
  SUBCASE("fraction outside [0,1) is a contract violation") {
    CHECK_THROWS_AS(inject_random_transitions(buffer, reachable, env, rng, 1.0, 50,
                                              &visited),
                    std::logic_error);
  }
}

TEST_CASE("tee wiring") {
  ExploreGoConfig cfg{};
  Fixture f(cfg, 4);
  SUBCASE("per-worker betas follow the schedule") {
    tee_wire(f.workers, {0.5, 0.9, 25.0, 4});
    CHECK(*f.workers[0].tee_beta == doctest::Approx(0.45));
    CHECK(*f.workers[3].tee_beta == doctest::Approx(0.5 * std::pow(0.9, 26.0)));
    for (int i = 1; i < 4; ++i)
      CHECK(*f.workers[i].tee_beta < *f.workers[i - 1].tee_beta);
  }
  SUBCASE("worker-count mismatch is a configuration error") {
    CHECK_THROWS_AS(tee_wire(f.workers, {0.5, 0.9, 25.0, 8}), ConfigError);
  }
}
