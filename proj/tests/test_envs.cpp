#include <doctest.h>

#include <nlohmann/json.hpp>
#include <set>

#include "explorego/check.hpp"
#include "explorego/envs/context_io.hpp"
#include "explorego/envs/cross.hpp"
#include "explorego/envs/four_rooms.hpp"
#include "explorego/rng.hpp"

using namespace explorego;
using namespace explorego::envs;

namespace {

CrossState cross_at(int x, int y, Rgb bg = {0, 0, 1}) {
  return CrossState{static_cast<int8_t>(x), static_cast<int8_t>(y), bg, false};
}

}  // namespace

TEST_CASE("cross step: endpoint teleports, goal entry, walls") {
  CrossEnv env;

  SUBCASE("right at the north endpoint teleports to the east endpoint") {
    const auto r = env.step(cross_at(2, 0), CrossEnv::kRight);
    const auto& s = std::get<CrossState>(r.next);
    CHECK(s.x == 4);
    CHECK(s.y == 2);
    CHECK(r.reward == 0.0f);
    CHECK_FALSE(r.done);
  }
  SUBCASE("full teleport table") {
    auto pos = [&](UnderlyingState s) {
      const auto& c = std::get<CrossState>(s);
      return std::pair<int, int>{c.x, c.y};
    };
    CHECK(pos(env.step(cross_at(2, 0), CrossEnv::kLeft).next) == std::pair{0, 2});
    CHECK(pos(env.step(cross_at(2, 4), CrossEnv::kRight).next) == std::pair{4, 2});
    CHECK(pos(env.step(cross_at(2, 4), CrossEnv::kLeft).next) == std::pair{0, 2});
    CHECK(pos(env.step(cross_at(4, 2), CrossEnv::kUp).next) == std::pair{2, 0});
    CHECK(pos(env.step(cross_at(4, 2), CrossEnv::kDown).next) == std::pair{2, 4});
    CHECK(pos(env.step(cross_at(0, 2), CrossEnv::kUp).next) == std::pair{2, 0});
    CHECK(pos(env.step(cross_at(0, 2), CrossEnv::kDown).next) == std::pair{2, 4});
  }
  SUBCASE("entering the centre terminates with reward 1") {
    const auto r = env.step(cross_at(2, 1), CrossEnv::kDown);
    const auto& s = std::get<CrossState>(r.next);
    CHECK(s.x == 2);
    CHECK(s.y == 2);
    CHECK(s.terminal);
    CHECK(r.reward == 1.0f);
    CHECK(r.done);
  }
  SUBCASE("moving into a wall leaves the position unchanged") {
    const auto r = env.step(cross_at(2, 0), CrossEnv::kUp);
    CHECK(std::get<CrossState>(r.next) == cross_at(2, 0));
    CHECK(r.reward == 0.0f);
    CHECK_FALSE(r.done);
  }
  SUBCASE("off-cross lateral move at a non-endpoint is a no-op") {
    const auto r = env.step(cross_at(2, 1), CrossEnv::kLeft);
    CHECK(std::get<CrossState>(r.next) == cross_at(2, 1));
  }
  SUBCASE("stepping a terminal state is a contract violation") {
    CrossState terminal = cross_at(2, 2);
    terminal.terminal = true;
    CHECK_THROWS_AS(env.step(terminal, CrossEnv::kUp), std::logic_error);
  }
  SUBCASE("timeout is 20 steps") { CHECK(env.timeout() == 20); }
}

TEST_CASE("cross encode: background, goal and agent colours") {
  CrossEnv env;
  auto at = [&](const std::vector<float>& obs, int c, int x, int y) {
    return obs[c * 25 + y * 5 + x];
  };

  SUBCASE("blue training context") {
    const auto obs = env.encode(cross_at(2, 0, {0, 0, 1}));
    for (int y = 0; y < 5; ++y)
      for (int x = 0; x < 5; ++x) {
        if (x == 2 && y == 0) continue;  // agent
        if (x == 2 && y == 2) continue;  // goal
        CHECK(at(obs, 0, x, y) == 0.0f);
        CHECK(at(obs, 1, x, y) == 0.0f);
        CHECK(at(obs, 2, x, y) == 1.0f);
      }
    CHECK(at(obs, 0, 2, 2) == 0.0f);
    CHECK(at(obs, 1, 2, 2) == 0.5f);
    CHECK(at(obs, 2, 2, 2) == 0.0f);
    CHECK(at(obs, 0, 2, 0) == 0.5f);
    CHECK(at(obs, 1, 2, 0) == 0.0f);
    CHECK(at(obs, 2, 2, 0) == 0.0f);
  }
  SUBCASE("white test context keeps the same overrides") {
    const auto obs = env.encode(cross_at(0, 2, {1, 1, 1}));
    CHECK(at(obs, 0, 1, 1) == 1.0f);
    CHECK(at(obs, 1, 2, 2) == 0.5f);
    CHECK(at(obs, 0, 0, 2) == 0.5f);
    CHECK(at(obs, 1, 0, 2) == 0.0f);
  }
  SUBCASE("agent colour overwrites the goal colour when co-located") {
    CrossState s = cross_at(2, 2);
    s.terminal = true;
    const auto obs = env.encode(s);
    CHECK(at(obs, 0, 2, 2) == 0.5f);
    CHECK(at(obs, 1, 2, 2) == 0.0f);
  }
  SUBCASE("encoding is deterministic") {
    CHECK(env.encode(cross_at(3, 2)) == env.encode(cross_at(3, 2)));
  }
}

TEST_CASE("cross context sets match the documented colours") {
  const auto [train, test] = gen_cross_context_sets();
  REQUIRE(train.contexts.size() == 4);
  REQUIRE(test.contexts.size() == 4);
  const Rgb expected[4] = {{0, 0, 1}, {0, 1, 0}, {1, 0, 0}, {1, 0, 1}};
  for (int i = 0; i < 4; ++i)
    CHECK(std::get<CrossContext>(train.contexts[i]).background == expected[i]);
  for (const auto& ctx : test.contexts)
    CHECK(std::get<CrossContext>(ctx).background == Rgb{1, 1, 1});
  CHECK(train.kind == ContextSetKind::Train);
  CHECK(test.kind == ContextSetKind::UnreachableTest);
}

TEST_CASE("four rooms step semantics") {
  FourRoomsEnv env(9);
  FourRoomsContext ctx;
  ctx.doorways = {0, 1, 2, 0};
  ctx.goal_x = 2;
  ctx.goal_y = 2;
  ctx.agent_x = 1;
  ctx.agent_y = 2;
  ctx.agent_dir = 0;  // east, facing the goal
  const auto start = env.initial_state(Context{ctx});

  SUBCASE("forward into the goal terminates with reward 1") {
    const auto r = env.step(start, FourRoomsEnv::kForward);
    CHECK(r.reward == 1.0f);
    CHECK(r.done);
    CHECK(std::get<FourRoomsState>(r.next).terminal);
  }
  SUBCASE("forward into a wall is a no-op") {
    FourRoomsState facing_wall = std::get<FourRoomsState>(start);
    facing_wall.dir = 2;  // west, border wall at x=0
    const auto r = env.step(UnderlyingState{facing_wall}, FourRoomsEnv::kForward);
    CHECK(std::get<FourRoomsState>(r.next) == facing_wall);
    CHECK(r.reward == 0.0f);
  }
  SUBCASE("turn left then right returns the original state") {
    for (int dir = 0; dir < 4; ++dir) {
      FourRoomsState s = std::get<FourRoomsState>(start);
      s.dir = static_cast<int8_t>(dir);
      const auto left = env.step(UnderlyingState{s}, FourRoomsEnv::kTurnLeft);
      const auto back = env.step(left.next, FourRoomsEnv::kTurnRight);
      CHECK(std::get<FourRoomsState>(back.next) == s);
    }
  }
  SUBCASE("timeout is 100 steps") { CHECK(env.timeout() == 100); }
  SUBCASE("rewards are 0 except at goal entry") {
    Rng rng(7);
    auto s = start;
    for (int i = 0; i < 300; ++i) {
      const auto r = env.step(s, static_cast<int>(rng.uniform_int(3)));
      if (r.done) {
        CHECK(r.reward == 1.0f);
        s = start;
      } else {
        CHECK(r.reward == 0.0f);
        s = r.next;
      }
    }
  }
}

TEST_CASE("four rooms encoding one-hots and doorways") {
  FourRoomsEnv env(9);
  FourRoomsContext ctx;
  ctx.doorways = {2, 0, 1, 2};
  ctx.goal_x = 6;
  ctx.goal_y = 7;
  ctx.agent_x = 1;
  ctx.agent_y = 1;
  ctx.agent_dir = 3;
  const auto obs = env.encode(env.initial_state(Context{ctx}));
  const int plane = 9 * 9;

  double goal_sum = 0, agent_sum = 0;
  for (int i = 0; i < plane; ++i) goal_sum += obs[plane + i];
  for (int c = 2; c < 6; ++c)
    for (int i = 0; i < plane; ++i) agent_sum += obs[c * plane + i];
  CHECK(goal_sum == 1.0);
  CHECK(agent_sum == 1.0);
  CHECK(obs[(2 + 3) * plane + 1 * 9 + 1] == 1.0f);

  // Doorway cells are open in the wall channel.
  for (int seg = 0; seg < 4; ++seg) {
    const auto [x, y] = env.doorway_cell(seg, ctx.doorways[seg]);
    CHECK(obs[y * 9 + x] == 0.0f);
  }
  CHECK(obs[4 * 9 + 4] == 1.0f);  // centre intersection stays a wall
}

TEST_CASE("four rooms context generation") {
  SUBCASE("paper-scale sizes and determinism") {
    const auto sets = gen_fourrooms_context_sets(42, 200, 200, 19);
    CHECK(sets.train.contexts.size() == 200);
    CHECK(sets.reachable_test.contexts.size() == 200);
    CHECK(sets.unreachable_test.contexts.size() == 200);
    const auto again = gen_fourrooms_context_sets(42, 200, 200, 19);
    CHECK(sets.train.contexts == again.train.contexts);
    CHECK(sets.reachable_test.contexts == again.reachable_test.contexts);
    CHECK(sets.unreachable_test.contexts == again.unreachable_test.contexts);
  }
  SUBCASE("reachable-test contexts share doorways and goal with a train context") {
    const auto sets = gen_fourrooms_context_sets(3, 20, 20, 9);
    REQUIRE(sets.reachable_test.contexts.size() == 20);
    for (size_t i = 0; i < sets.reachable_test.contexts.size(); ++i) {
      const auto& r = std::get<FourRoomsContext>(sets.reachable_test.contexts[i]);
      const auto& t = std::get<FourRoomsContext>(sets.train.contexts[i]);
      CHECK(r.doorways == t.doorways);
      CHECK(r.goal_x == t.goal_x);
      CHECK(r.goal_y == t.goal_y);
    }
  }
  SUBCASE("unreachable doorway tuples are distinct and disjoint from train") {
    const auto sets = gen_fourrooms_context_sets(5, 20, 20, 9);
    std::set<std::array<uint8_t, 4>> train_tuples, test_tuples;
    for (const auto& c : sets.train.contexts)
      train_tuples.insert(std::get<FourRoomsContext>(c).doorways);
    for (const auto& c : sets.unreachable_test.contexts) {
      const auto& doorways = std::get<FourRoomsContext>(c).doorways;
      CHECK(train_tuples.count(doorways) == 0);
      CHECK(test_tuples.insert(doorways).second);  // pairwise distinct
    }
  }
  SUBCASE("agent pose is never on the goal") {
    const auto sets = gen_fourrooms_context_sets(11, 30, 30, 9);
    auto check_set = [](const ContextSet& set) {
      for (const auto& c : set.contexts) {
        const auto& f = std::get<FourRoomsContext>(c);
        CHECK((f.agent_x != f.goal_x || f.agent_y != f.goal_y));
      }
    };
    check_set(sets.train);
    check_set(sets.reachable_test);
    check_set(sets.unreachable_test);
  }
  SUBCASE("too few distinct doorway tuples is a configuration error") {
    // grid 5 -> one candidate per segment -> a single doorway tuple
    CHECK_THROWS_AS(gen_fourrooms_context_sets(0, 1, 1, 5), ConfigError);
  }
}

TEST_CASE("encoding injectivity: distinct states give distinct observations") {
  SUBCASE("cross, all cells of five colours") {
    CrossEnv env;
    std::set<std::vector<float>> seen;
    int n = 0;
    const Rgb colours[5] = {{0, 0, 1}, {0, 1, 0}, {1, 0, 0}, {1, 0, 1}, {1, 1, 1}};
    for (const auto& bg : colours)
      for (int y = 0; y < 5; ++y)
        for (int x = 0; x < 5; ++x) {
          if (!CrossEnv::on_cross(x, y)) continue;
          seen.insert(env.encode(cross_at(x, y, bg)));
          ++n;
        }
    CHECK(static_cast<int>(seen.size()) == n);
  }
  SUBCASE("four rooms, all poses of two contexts") {
    FourRoomsEnv env(9);
    const auto sets = gen_fourrooms_context_sets(9, 2, 2, 9);
    std::set<std::vector<float>> seen;
    int n = 0;
    for (const auto& c : sets.train.contexts) {
      const auto& f = std::get<FourRoomsContext>(c);
      for (const auto& [x, y] : env.open_cells(f.doorways))
        for (int dir = 0; dir < 4; ++dir) {
          FourRoomsState s{static_cast<int8_t>(x),      static_cast<int8_t>(y),
                           static_cast<int8_t>(dir),    f.doorways,
                           static_cast<int8_t>(f.goal_x), static_cast<int8_t>(f.goal_y),
                           false};
          seen.insert(env.encode(UnderlyingState{s}));
          ++n;
        }
    }
    CHECK(static_cast<int>(seen.size()) == n);
  }
}

TEST_CASE("context set JSON round-trip") {
  SUBCASE("cross") {
    const auto [train, test] = gen_cross_context_sets();
    const auto j = context_set_to_json(train);
    CHECK(j.at("kind") == "train");
    const auto back = context_set_from_json(j);
    CHECK(back.contexts == train.contexts);
    CHECK(back.kind == train.kind);
  }
  SUBCASE("four rooms") {
    const auto sets = gen_fourrooms_context_sets(17, 5, 5, 9);
    const auto j = context_set_to_json(sets.unreachable_test);
    CHECK(j.at("kind") == "unreachable_test");
    CHECK(j.at("master_seed") == 17);
    const auto back = context_set_from_json(j);
    CHECK(back.contexts == sets.unreachable_test.contexts);
  }
}
