#pragma once

#include "explorego/envs/env.hpp"

namespace explorego {

/// A single environment step. Observations are not stored: both envs have
/// injective deterministic encodings, so consumers materialise them with
/// Env::encode(state) when a network input is needed. This keeps replay
/// buffers compact at full-scale settings.
struct Transition {
  envs::UnderlyingState state;
  int action = 0;
  float reward = 0.0f;     // extrinsic
  float intrinsic = 0.0f;  // count bonus at collection time
  envs::UnderlyingState next_state;
  bool done = false;       // true termination (goal); timeouts leave this false
  bool truncated = false;  // episode ended by the step limit
  bool pure_exploration = false;
  bool injected = false;   // produced by oracle sampling, not by a rollout
};

}  // namespace explorego
