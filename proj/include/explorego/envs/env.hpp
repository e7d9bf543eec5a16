#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace explorego::envs {

using Rgb = std::array<float, 3>;

/// Which arm of the cross the episode starts on.
enum class Arm : uint8_t { North, South, West, East };

/// Headings for Four Rooms, Minigrid convention: 0=east, 1=south, 2=west, 3=north.
inline constexpr int kHeadingCount = 4;

struct CrossContext {
  Rgb background{};
  Arm start_arm = Arm::North;
  bool operator==(const CrossContext&) const = default;
};

struct FourRoomsContext {
  /// Doorway offset per wall segment, order: top, bottom, left, right.
  /// Each offset is in [0, (grid-3)/2).
  std::array<uint8_t, 4> doorways{};
  uint8_t goal_x = 0, goal_y = 0;
  uint8_t agent_x = 0, agent_y = 0;
  uint8_t agent_dir = 0;
  bool operator==(const FourRoomsContext&) const = default;
};

using Context = std::variant<CrossContext, FourRoomsContext>;

struct CrossState {
  int8_t x = 0, y = 0;
  Rgb background{};
  bool terminal = false;
  bool operator==(const CrossState&) const = default;
};

struct FourRoomsState {
  int8_t x = 0, y = 0, dir = 0;
  std::array<uint8_t, 4> doorways{};
  int8_t goal_x = 0, goal_y = 0;
  bool terminal = false;
  bool operator==(const FourRoomsState&) const = default;
};

/// The env-internal Markov state. Two states compare equal iff all fields
/// (including the terminal flag) are equal; used as the key for count
/// tables, oracle tables and diagnostics.
using UnderlyingState = std::variant<CrossState, FourRoomsState>;

struct StateHash {
  static void mix(size_t& h, uint64_t v) {
    h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  }
  size_t operator()(const UnderlyingState& s) const {
    size_t h = s.index();
    if (const auto* c = std::get_if<CrossState>(&s)) {
      mix(h, static_cast<uint64_t>(static_cast<uint8_t>(c->x)) << 8 |
                 static_cast<uint8_t>(c->y));
      for (float v : c->background) mix(h, std::bit_cast<uint32_t>(v));
      mix(h, c->terminal);
    } else {
      const auto& f = std::get<FourRoomsState>(s);
      mix(h, static_cast<uint64_t>(static_cast<uint8_t>(f.x)) << 16 |
                 static_cast<uint64_t>(static_cast<uint8_t>(f.y)) << 8 |
                 static_cast<uint8_t>(f.dir));
      mix(h, static_cast<uint64_t>(f.doorways[0]) << 24 |
                 static_cast<uint64_t>(f.doorways[1]) << 16 |
                 static_cast<uint64_t>(f.doorways[2]) << 8 | f.doorways[3]);
      mix(h, static_cast<uint64_t>(static_cast<uint8_t>(f.goal_x)) << 8 |
                 static_cast<uint8_t>(f.goal_y));
      mix(h, f.terminal);
    }
    return h;
  }
};

inline bool is_terminal(const UnderlyingState& s) {
  return std::visit([](const auto& v) { return v.terminal; }, s);
}

/// Observation tensor layout (channels, height, width), flattened row-major
/// as channel * (height * width) + y * width + x.
struct ObsShape {
  int channels = 0, height = 0, width = 0;
  int size() const { return channels * height * width; }
};

struct StepResult {
  UnderlyingState next;
  float reward = 0.0f;
  bool done = false;
};

enum class ContextSetKind { Train, ReachableTest, UnreachableTest };

struct ContextSet {
  ContextSetKind kind = ContextSetKind::Train;
  std::vector<Context> contexts;
  uint64_t master_seed = 0;
};

/// A CMDP with deterministic dynamics. Instances are immutable environment
/// descriptions; per-episode state lives with the caller, so a single
/// instance can back any number of concurrent workers.
class Env {
 public:
  virtual ~Env() = default;

  virtual int action_count() const = 0;
  virtual int timeout() const = 0;
  virtual ObsShape obs_shape() const = 0;

  /// The underlying state an episode in `ctx` starts from.
  virtual UnderlyingState initial_state(const Context& ctx) const = 0;

  /// Deterministic transition. Precondition: `s` is non-terminal.
  virtual StepResult step(const UnderlyingState& s, int action) const = 0;

  /// Writes the observation for `s` into `out` (size obs_shape().size()).
  virtual void encode(const UnderlyingState& s, std::span<float> out) const = 0;

  std::vector<float> encode(const UnderlyingState& s) const {
    std::vector<float> obs(static_cast<size_t>(obs_shape().size()));
    encode(s, obs);
    return obs;
  }

  /// Canonical state string for JSON dumps and cross-implementation diffs.
  virtual std::string state_key(const UnderlyingState& s) const = 0;
};

inline const char* to_string(Arm a) {
  switch (a) {
    case Arm::North: return "North";
    case Arm::South: return "South";
    case Arm::West: return "West";
    case Arm::East: return "East";
  }
  return "?";
}

inline const char* to_string(ContextSetKind k) {
  switch (k) {
    case ContextSetKind::Train: return "train";
    case ContextSetKind::ReachableTest: return "reachable_test";
    case ContextSetKind::UnreachableTest: return "unreachable_test";
  }
  return "?";
}

}  // namespace explorego::envs
