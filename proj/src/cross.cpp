#include "explorego/envs/cross.hpp"

#include <cstdio>
#include <optional>

#include "explorego/check.hpp"

namespace explorego::envs {

std::pair<int, int> CrossEnv::arm_endpoint(Arm a) {
  switch (a) {
    case Arm::North: return {2, 0};
    case Arm::South: return {2, 4};
    case Arm::West: return {0, 2};
    case Arm::East: return {4, 2};
  }
  return {2, 0};
}

namespace {

// Lateral actions at an arm's end-point teleport to the adjacent end-point:
// N/S map Left->W and Right->E, E/W map Up->N and Down->S.
std::optional<std::pair<int, int>> teleport_target(int x, int y, int action) {
  const bool north_or_south = (x == 2 && (y == 0 || y == 4));
  const bool east_or_west = (y == 2 && (x == 0 || x == 4));
  if (north_or_south) {
    if (action == CrossEnv::kLeft) return {{0, 2}};
    if (action == CrossEnv::kRight) return {{4, 2}};
  } else if (east_or_west) {
    if (action == CrossEnv::kUp) return {{2, 0}};
    if (action == CrossEnv::kDown) return {{2, 4}};
  }
  return std::nullopt;
}

}  // namespace

UnderlyingState CrossEnv::initial_state(const Context& ctx) const {
  const auto& c = std::get<CrossContext>(ctx);
  auto [x, y] = arm_endpoint(c.start_arm);
  return CrossState{static_cast<int8_t>(x), static_cast<int8_t>(y), c.background, false};
}

StepResult CrossEnv::step(const UnderlyingState& state, int action) const {
  const auto& s = std::get<CrossState>(state);
  check(!s.terminal, "cross_step on a terminal state");
  check(action >= 0 && action < 4, "cross_step action out of range");

  int x = s.x, y = s.y;
  if (auto jump = teleport_target(x, y, action)) {
    x = jump->first;
    y = jump->second;
  } else {
    int nx = x, ny = y;
    switch (action) {
      case kUp: ny -= 1; break;
      case kDown: ny += 1; break;
      case kLeft: nx -= 1; break;
      case kRight: nx += 1; break;
    }
    if (on_cross(nx, ny)) {  // moving into a wall leaves the position unchanged
      x = nx;
      y = ny;
    }
  }

  CrossState next{static_cast<int8_t>(x), static_cast<int8_t>(y), s.background, false};
  if (x == kGoalX && y == kGoalY) {
    next.terminal = true;
    return {next, 1.0f, true};
  }
  return {next, 0.0f, false};
}

void CrossEnv::encode(const UnderlyingState& state, std::span<float> out) const {
  const auto& s = std::get<CrossState>(state);
  check(out.size() == 75, "cross_encode output size");
  for (int c = 0; c < 3; ++c)
    for (int i = 0; i < 25; ++i) out[c * 25 + i] = s.background[c];
  auto put = [&](int x, int y, const Rgb& colour) {
    for (int c = 0; c < 3; ++c) out[c * 25 + y * 5 + x] = colour[c];
  };
  put(kGoalX, kGoalY, kGoalColour);
  // Agent overwrites the goal colour when co-located.
  put(s.x, s.y, kAgentColour);
}

std::string CrossEnv::state_key(const UnderlyingState& state) const {
  const auto& s = std::get<CrossState>(state);
  char buf[96];
  std::snprintf(buf, sizeof(buf), "cross|%d,%d|%g,%g,%g%s", int(s.x), int(s.y),
                double(s.background[0]), double(s.background[1]), double(s.background[2]),
                s.terminal ? "|terminal" : "");
  return buf;
}

std::pair<ContextSet, ContextSet> gen_cross_context_sets() {
  const Rgb train_colours[4] = {{0, 0, 1}, {0, 1, 0}, {1, 0, 0}, {1, 0, 1}};
  const Arm arms[4] = {Arm::North, Arm::East, Arm::South, Arm::West};

  ContextSet train{ContextSetKind::Train, {}, 0};
  for (int i = 0; i < 4; ++i)
    train.contexts.emplace_back(CrossContext{train_colours[i], arms[i]});

  ContextSet test{ContextSetKind::UnreachableTest, {}, 0};
  for (int i = 0; i < 4; ++i)
    test.contexts.emplace_back(CrossContext{Rgb{1, 1, 1}, arms[i]});

  return {std::move(train), std::move(test)};
}

}  // namespace explorego::envs
