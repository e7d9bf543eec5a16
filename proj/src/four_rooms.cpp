#include "explorego/envs/four_rooms.hpp"

#include <algorithm>
#include <cstdio>
#include <set>

#include "explorego/check.hpp"
#include "explorego/rng.hpp"

namespace explorego::envs {

FourRoomsEnv::FourRoomsEnv(int grid) : grid_(grid) {
  check_config(grid >= 5 && grid % 2 == 1,
               "fourrooms grid size must be odd and at least 5");
}

std::pair<int, int> FourRoomsEnv::doorway_cell(int segment, int offset) const {
  const int c = (grid_ - 1) / 2;
  switch (segment) {
    case 0: return {c, 1 + offset};          // top part of the vertical wall
    case 1: return {c, c + 1 + offset};      // bottom part
    case 2: return {1 + offset, c};          // left part of the horizontal wall
    default: return {c + 1 + offset, c};     // right part
  }
}

bool FourRoomsEnv::is_wall(int x, int y, const std::array<uint8_t, 4>& doorways) const {
  if (x <= 0 || y <= 0 || x >= grid_ - 1 || y >= grid_ - 1) return true;
  const int c = (grid_ - 1) / 2;
  if (x != c && y != c) return false;
  for (int seg = 0; seg < 4; ++seg) {
    auto [dx_, dy_] = doorway_cell(seg, doorways[seg]);
    if (x == dx_ && y == dy_) return false;
  }
  return x == c || y == c;
}

std::vector<std::pair<int, int>> FourRoomsEnv::open_cells(
    const std::array<uint8_t, 4>& doorways) const {
  std::vector<std::pair<int, int>> cells;
  for (int y = 0; y < grid_; ++y)
    for (int x = 0; x < grid_; ++x)
      if (!is_wall(x, y, doorways)) cells.emplace_back(x, y);
  return cells;
}

UnderlyingState FourRoomsEnv::initial_state(const Context& ctx) const {
  const auto& c = std::get<FourRoomsContext>(ctx);
  return FourRoomsState{static_cast<int8_t>(c.agent_x), static_cast<int8_t>(c.agent_y),
                        static_cast<int8_t>(c.agent_dir), c.doorways,
                        static_cast<int8_t>(c.goal_x), static_cast<int8_t>(c.goal_y),
                        false};
}

StepResult FourRoomsEnv::step(const UnderlyingState& state, int action) const {
  const auto& s = std::get<FourRoomsState>(state);
  check(!s.terminal, "fourrooms_step on a terminal state");
  check(action >= 0 && action < 3, "fourrooms_step action out of range");

  FourRoomsState next = s;
  if (action == kTurnLeft) {
    next.dir = static_cast<int8_t>((s.dir + 3) & 3);
  } else if (action == kTurnRight) {
    next.dir = static_cast<int8_t>((s.dir + 1) & 3);
  } else {
    const int nx = s.x + dx(s.dir);
    const int ny = s.y + dy(s.dir);
    if (!is_wall(nx, ny, s.doorways)) {
      next.x = static_cast<int8_t>(nx);
      next.y = static_cast<int8_t>(ny);
    }
  }
  if (next.x == next.goal_x && next.y == next.goal_y) {
    next.terminal = true;
    return {next, 1.0f, true};
  }
  return {next, 0.0f, false};
}

void FourRoomsEnv::encode(const UnderlyingState& state, std::span<float> out) const {
  const auto& s = std::get<FourRoomsState>(state);
  const int plane = grid_ * grid_;
  check(static_cast<int>(out.size()) == 6 * plane, "fourrooms_encode output size");
  std::fill(out.begin(), out.end(), 0.0f);
  for (int y = 0; y < grid_; ++y)
    for (int x = 0; x < grid_; ++x)
      if (is_wall(x, y, s.doorways)) out[y * grid_ + x] = 1.0f;
  out[plane + s.goal_y * grid_ + s.goal_x] = 1.0f;
  out[(2 + s.dir) * plane + s.y * grid_ + s.x] = 1.0f;
}

std::string FourRoomsEnv::state_key(const UnderlyingState& state) const {
  const auto& s = std::get<FourRoomsState>(state);
  char buf[128];
  std::snprintf(buf, sizeof(buf),
                "fourrooms|pos=%d,%d|dir=%d|doors=%d,%d,%d,%d|goal=%d,%d%s", int(s.x),
                int(s.y), int(s.dir), int(s.doorways[0]), int(s.doorways[1]),
                int(s.doorways[2]), int(s.doorways[3]), int(s.goal_x), int(s.goal_y),
                s.terminal ? "|terminal" : "");
  return buf;
}

namespace {

std::array<uint8_t, 4> draw_doorways(Rng& rng, int segment_len) {
  std::array<uint8_t, 4> d{};
  for (auto& off : d) off = static_cast<uint8_t>(rng.uniform_int(segment_len));
  return d;
}

std::pair<uint8_t, uint8_t> draw_open_cell(Rng& rng,
                                           const std::vector<std::pair<int, int>>& cells) {
  const auto& c = cells[rng.uniform_int(cells.size())];
  return {static_cast<uint8_t>(c.first), static_cast<uint8_t>(c.second)};
}

FourRoomsContext draw_context(Rng& rng, const FourRoomsEnv& env,
                              const std::array<uint8_t, 4>& doorways) {
  FourRoomsContext ctx;
  ctx.doorways = doorways;
  const auto cells = env.open_cells(doorways);
  std::tie(ctx.goal_x, ctx.goal_y) = draw_open_cell(rng, cells);
  do {
    std::tie(ctx.agent_x, ctx.agent_y) = draw_open_cell(rng, cells);
  } while (ctx.agent_x == ctx.goal_x && ctx.agent_y == ctx.goal_y);
  ctx.agent_dir = static_cast<uint8_t>(rng.uniform_int(kHeadingCount));
  return ctx;
}

}  // namespace

FourRoomsContextSets gen_fourrooms_context_sets(uint64_t master_seed, int n_train,
                                                int n_test, int grid) {
  FourRoomsEnv env(grid);
  const int seg = env.segment_len();
  const long tuple_count = static_cast<long>(seg) * seg * seg * seg;
  check_config(tuple_count >= n_train + n_test,
               "fourrooms grid too small for the requested number of distinct "
               "doorway tuples (need n_train + n_test)");

  Rng rng(derive_seed(master_seed, "contexts", 0));
  FourRoomsContextSets out;
  out.train = {ContextSetKind::Train, {}, master_seed};
  out.reachable_test = {ContextSetKind::ReachableTest, {}, master_seed};
  out.unreachable_test = {ContextSetKind::UnreachableTest, {}, master_seed};

  std::set<std::array<uint8_t, 4>> train_tuples;
  for (int i = 0; i < n_train; ++i) {
    const auto ctx = draw_context(rng, env, draw_doorways(rng, seg));
    train_tuples.insert(ctx.doorways);
    out.train.contexts.emplace_back(ctx);
  }

  // Same doorways and goal as a train context, fresh agent pose.
  for (const auto& c : out.train.contexts) {
    const auto& tc = std::get<FourRoomsContext>(c);
    FourRoomsContext rc = tc;
    const auto cells = env.open_cells(tc.doorways);
    do {
      std::tie(rc.agent_x, rc.agent_y) = draw_open_cell(rng, cells);
    } while (rc.agent_x == rc.goal_x && rc.agent_y == rc.goal_y);
    rc.agent_dir = static_cast<uint8_t>(rng.uniform_int(kHeadingCount));
    out.reachable_test.contexts.emplace_back(rc);
  }

  std::set<std::array<uint8_t, 4>> used = train_tuples;
  for (int i = 0; i < n_test; ++i) {
    std::array<uint8_t, 4> doorways;
    do {
      doorways = draw_doorways(rng, seg);
    } while (used.count(doorways) > 0);
    used.insert(doorways);
    out.unreachable_test.contexts.emplace_back(draw_context(rng, env, doorways));
  }

  return out;
}

}  // namespace explorego::envs
