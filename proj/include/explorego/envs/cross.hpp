#pragma once

#include "explorego/envs/env.hpp"

namespace explorego::envs {

/// Cross-shaped 5x5 grid world. The walkable cells are the 9 cells of the
/// cross (centre (2,2), arms of length 2); coordinates are (x,y) with the
/// origin at the top-left. Entering the centre yields reward 1 and ends the
/// episode. Lateral actions at an arm's end-point teleport to the adjacent
/// end-point; every other move into a wall is a no-op. The per-episode
/// context contributes only the background colour and starting arm.
class CrossEnv final : public Env {
 public:
  enum Action { kUp = 0, kDown = 1, kLeft = 2, kRight = 3 };

  static constexpr int kGoalX = 2, kGoalY = 2;
  static constexpr Rgb kGoalColour{0.0f, 0.5f, 0.0f};
  static constexpr Rgb kAgentColour{0.5f, 0.0f, 0.0f};

  int action_count() const override { return 4; }
  int timeout() const override { return 20; }
  ObsShape obs_shape() const override { return {3, 5, 5}; }

  UnderlyingState initial_state(const Context& ctx) const override;
  StepResult step(const UnderlyingState& s, int action) const override;
  using Env::encode;
  void encode(const UnderlyingState& s, std::span<float> out) const override;
  std::string state_key(const UnderlyingState& s) const override;

  static bool on_cross(int x, int y) {
    return (x == 2 && y >= 0 && y <= 4) || (y == 2 && x >= 0 && x <= 4);
  }

  /// End-point coordinates per arm.
  static std::pair<int, int> arm_endpoint(Arm a);
};

/// The four training contexts of the illustrative CMDP (backgrounds blue,
/// green, red, magenta on arms N, E, S, W) and the four white-background
/// test contexts with the same starting arms. The test contexts are
/// unreachable: no action sequence changes the background colour.
std::pair<ContextSet, ContextSet> gen_cross_context_sets();

}  // namespace explorego::envs
