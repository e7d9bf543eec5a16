#pragma once

#include <nlohmann/json_fwd.hpp>

#include "explorego/envs/env.hpp"

namespace explorego::envs {

/// JSON document shape: {"kind": ..., "master_seed": ..., "contexts": [...]}.
/// Cross contexts serialise as {"background": [r,g,b], "start_arm": "North"},
/// Four Rooms as {"doorways": [...], "goal": [x,y], "agent_pos": [x,y],
/// "agent_dir": d}.
nlohmann::json context_set_to_json(const ContextSet& set);
ContextSet context_set_from_json(const nlohmann::json& j);

nlohmann::json context_to_json(const Context& ctx);
Context context_from_json(const nlohmann::json& j);

}  // namespace explorego::envs
