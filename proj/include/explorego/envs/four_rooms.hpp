#pragma once

#include "explorego/envs/env.hpp"

namespace explorego::envs {

/// Fully observable Four Rooms grid world with the reduced 3-action space
/// (turn left, turn right, move forward). The grid is G x G with an outer
/// wall and two internal wall lines at row/column (G-1)/2; each of the four
/// wall segments has exactly one open doorway cell selected by the context.
/// Reaching the goal cell gives reward 1 and ends the episode; every other
/// transition gives 0.
///
/// Observations are (6, G, G) binary tensors: channel 0 walls, channel 1
/// goal one-hot, channels 2-5 agent-position one-hot indexed by heading.
class FourRoomsEnv final : public Env {
 public:
  enum Action { kTurnLeft = 0, kTurnRight = 1, kForward = 2 };

  explicit FourRoomsEnv(int grid = 19);

  int grid() const { return grid_; }
  /// Number of candidate doorway cells per wall segment.
  int segment_len() const { return (grid_ - 3) / 2; }

  int action_count() const override { return 3; }
  int timeout() const override { return 100; }
  ObsShape obs_shape() const override { return {6, grid_, grid_}; }

  UnderlyingState initial_state(const Context& ctx) const override;
  StepResult step(const UnderlyingState& s, int action) const override;
  using Env::encode;
  void encode(const UnderlyingState& s, std::span<float> out) const override;
  std::string state_key(const UnderlyingState& s) const override;

  bool is_wall(int x, int y, const std::array<uint8_t, 4>& doorways) const;

  /// Doorway cell coordinates for a segment index (0=top, 1=bottom, 2=left,
  /// 3=right) and offset within the segment.
  std::pair<int, int> doorway_cell(int segment, int offset) const;

  /// All non-wall cells for a doorway layout, in row-major order.
  std::vector<std::pair<int, int>> open_cells(const std::array<uint8_t, 4>& doorways) const;

  static constexpr int dx(int dir) { constexpr int d[4] = {1, 0, -1, 0}; return d[dir & 3]; }
  static constexpr int dy(int dir) { constexpr int d[4] = {0, 1, 0, -1}; return d[dir & 3]; }

 private:
  int grid_;
};

/// Draws train / reachable-test / unreachable-test context sets.
///
/// Train contexts sample doorways, goal and agent pose independently and
/// uniformly. Each reachable-test context keeps a train context's doorways
/// and goal but redraws the agent pose. Unreachable-test contexts get
/// doorway tuples that are pairwise distinct and disjoint from every train
/// tuple (rejection sampling) plus a fresh goal and pose. Deterministic in
/// master_seed.
struct FourRoomsContextSets {
  ContextSet train, reachable_test, unreachable_test;
};
FourRoomsContextSets gen_fourrooms_context_sets(uint64_t master_seed, int n_train,
                                                int n_test, int grid);

}  // namespace explorego::envs
