#include <doctest.h>

#include <cmath>
#include <map>

#include "explorego/envs/cross.hpp"
#include "explorego/explore/counts.hpp"
#include "explorego/explore/policies.hpp"

using namespace explorego;
using namespace explorego::explore;

namespace {

envs::UnderlyingState some_state(int x = 2, int y = 0) {
  return envs::CrossState{static_cast<int8_t>(x), static_cast<int8_t>(y), {0, 0, 1},
                          false};
}

}  // namespace

TEST_CASE("count bonus: global inverse sqrt times episodic first-visit flag") {
  GlobalCounts global;
  CountTables tables(global);
  const auto s = some_state();

  SUBCASE("first-ever visit yields exactly 1") {
    CHECK(tables.observe_and_reward(s, 0) == 1.0f);
  }
  SUBCASE("fourth global visit, first of this episode, yields 0.5") {
    for (int i = 0; i < 3; ++i) {
      tables.observe_and_reward(s, 0);
      tables.reset_episode();
    }
    CHECK(tables.observe_and_reward(s, 0) == doctest::Approx(0.5).epsilon(1e-7));
  }
  SUBCASE("second visit within an episode yields 0 regardless of the global count") {
    tables.observe_and_reward(s, 0);
    CHECK(tables.observe_and_reward(s, 0) == 0.0f);
    CHECK(tables.observe_and_reward(s, 0) == 0.0f);
  }
  SUBCASE("different actions count separately") {
    CHECK(tables.observe_and_reward(s, 0) == 1.0f);
    CHECK(tables.observe_and_reward(s, 1) == 1.0f);
  }
  SUBCASE("global sequence is 1, 1/sqrt(2), 1/sqrt(3), ... across episodes") {
    for (int visit = 1; visit <= 6; ++visit) {
      const float eta = tables.observe_and_reward(s, 2);
      CHECK(eta == doctest::Approx(1.0 / std::sqrt(double(visit))).epsilon(1e-6));
      tables.reset_episode();
    }
  }
}

TEST_CASE("episode reset touches only the episodic table") {
  GlobalCounts global;
  CountTables tables(global);
  const auto s = some_state();
  tables.observe_and_reward(s, 0);
  tables.observe_and_reward(s, 0);
  CHECK(global.get(s, 0) == 2);

  tables.reset_episode();
  CHECK(global.get(s, 0) == 2);
  CHECK(tables.episode_count(s, 0) == 0);

  tables.reset_episode();  // idempotent
  CHECK(global.get(s, 0) == 2);

  // Next visit is an episodic first visit again.
  CHECK(tables.observe_and_reward(s, 0) == doctest::Approx(1.0 / std::sqrt(3.0)));
}

TEST_CASE("eta is nonzero at most once per (s,a) within an episode") {
  GlobalCounts global;
  CountTables tables(global);
  Rng rng(5);
  for (int episode = 0; episode < 20; ++episode) {
    std::map<std::pair<std::string, int>, int> nonzero;
    for (int step = 0; step < 50; ++step) {
      const auto s = some_state(2, static_cast<int>(rng.uniform_int(4)));
      const int a = static_cast<int>(rng.uniform_int(4));
      if (tables.observe_and_reward(s, a) > 0.0f) {
        envs::CrossEnv env;
        ++nonzero[{env.state_key(s), a}];
      }
    }
    for (const auto& [key, n] : nonzero) CHECK(n == 1);
    tables.reset_episode();
  }
}

TEST_CASE("tee beta schedule") {
  SUBCASE("documented endpoints at phi=0.5, lambda=0.9, alpha=25, N=50") {
    const auto betas = tee_betas(0.5, 0.9, 25, 50);
    REQUIRE(betas.size() == 50);
    CHECK(std::abs(betas[0] - 0.45) < 1e-12);
    // beta_49 = 0.5 * 0.9^26 evaluated directly from the schedule formula.
    CHECK(std::abs(betas[49] - 0.5 * std::pow(0.9, 26.0)) < 1e-12);
    CHECK(betas[49] == doctest::Approx(0.0323054094).epsilon(1e-6));
  }
  SUBCASE("lambda = 1 collapses every beta to phi") {
    for (const double beta : tee_betas(0.7, 1.0, 25, 10))
      CHECK(beta == doctest::Approx(0.7).epsilon(1e-12));
  }
  SUBCASE("strictly decreasing for lambda < 1 and alpha > 0") {
    const auto betas = tee_betas(0.5, 0.9, 25, 50);
    for (size_t i = 1; i < betas.size(); ++i) CHECK(betas[i] < betas[i - 1]);
  }
  SUBCASE("fewer than two workers is a configuration error") {
    CHECK_THROWS_AS(tee_betas(0.5, 0.9, 25, 1), ConfigError);
  }
}

TEST_CASE("uniform pure-exploration policy") {
  SUBCASE("a single action is always chosen") {
    Rng rng(1);
    for (int i = 0; i < 10; ++i) CHECK(pure_policy_uniform(rng, 1) == 0);
  }
  SUBCASE("empirical frequencies are uniform within 3 sigma") {
    Rng rng(77);
    const int n = 100'000, actions = 4;
    int freq[4] = {0, 0, 0, 0};
    for (int i = 0; i < n; ++i) ++freq[pure_policy_uniform(rng, actions)];
    const double p = 1.0 / actions;
    const double sigma = std::sqrt(n * p * (1 - p));
    for (int a = 0; a < actions; ++a) CHECK(std::abs(freq[a] - n * p) <= 3 * sigma);
  }
  SUBCASE("identical streams give identical draws") {
    Rng a(9), b(9);
    for (int i = 0; i < 100; ++i)
      CHECK(pure_policy_uniform(a, 4) == pure_policy_uniform(b, 4));
  }
}

TEST_CASE("u-greedy pure-exploration policy") {
  Rng rng(3);
  SUBCASE("eps = 0 takes the argmax") {
    const float u[] = {0.2f, 0.7f, 0.1f};
    CHECK(pure_policy_ugreedy(u, 0.0f, rng) == 1);
  }
  SUBCASE("ties break to the lowest index") {
    const float u[] = {0.5f, 0.5f, 0.1f};
    CHECK(pure_policy_ugreedy(u, 0.0f, rng) == 0);
  }
  SUBCASE("eps = 1 is uniform") {
    const float u[] = {10.0f, 0.0f, 0.0f, 0.0f};
    int freq[4] = {0, 0, 0, 0};
    for (int i = 0; i < 40'000; ++i) ++freq[pure_policy_ugreedy(u, 1.0f, rng)];
    const double sigma = std::sqrt(40'000 * 0.25 * 0.75);
    for (int a = 0; a < 4; ++a) CHECK(std::abs(freq[a] - 10'000) <= 3 * sigma);
  }
}
