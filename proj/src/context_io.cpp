#include "explorego/envs/context_io.hpp"

#include <nlohmann/json.hpp>

#include "explorego/check.hpp"

namespace explorego::envs {

using nlohmann::json;

namespace {

Arm arm_from_string(const std::string& s) {
  if (s == "North") return Arm::North;
  if (s == "South") return Arm::South;
  if (s == "West") return Arm::West;
  if (s == "East") return Arm::East;
  throw ConfigError("unknown start_arm: " + s);
}

ContextSetKind kind_from_string(const std::string& s) {
  if (s == "train") return ContextSetKind::Train;
  if (s == "reachable_test") return ContextSetKind::ReachableTest;
  if (s == "unreachable_test") return ContextSetKind::UnreachableTest;
  throw ConfigError("unknown context set kind: " + s);
}

}  // namespace

json context_to_json(const Context& ctx) {
  json j;
  if (const auto* c = std::get_if<CrossContext>(&ctx)) {
    j["background"] = {c->background[0], c->background[1], c->background[2]};
    j["start_arm"] = to_string(c->start_arm);
  } else {
    const auto& f = std::get<FourRoomsContext>(ctx);
    j["doorways"] = {f.doorways[0], f.doorways[1], f.doorways[2], f.doorways[3]};
    j["goal"] = {f.goal_x, f.goal_y};
    j["agent_pos"] = {f.agent_x, f.agent_y};
    j["agent_dir"] = f.agent_dir;
  }
  return j;
}

Context context_from_json(const json& j) {
  if (j.contains("background")) {
    CrossContext c;
    for (int i = 0; i < 3; ++i) c.background[i] = j.at("background").at(i).get<float>();
    c.start_arm = arm_from_string(j.at("start_arm").get<std::string>());
    return c;
  }
  FourRoomsContext f;
  for (int i = 0; i < 4; ++i) f.doorways[i] = j.at("doorways").at(i).get<uint8_t>();
  f.goal_x = j.at("goal").at(0).get<uint8_t>();
  f.goal_y = j.at("goal").at(1).get<uint8_t>();
  f.agent_x = j.at("agent_pos").at(0).get<uint8_t>();
  f.agent_y = j.at("agent_pos").at(1).get<uint8_t>();
  f.agent_dir = j.at("agent_dir").get<uint8_t>();
  return f;
}

json context_set_to_json(const ContextSet& set) {
  json contexts = json::array();
  for (const auto& c : set.contexts) contexts.push_back(context_to_json(c));
  return json{{"kind", to_string(set.kind)},
              {"master_seed", set.master_seed},
              {"contexts", std::move(contexts)}};
}

ContextSet context_set_from_json(const json& j) {
  ContextSet set;
  set.kind = kind_from_string(j.at("kind").get<std::string>());
  set.master_seed = j.at("master_seed").get<uint64_t>();
  for (const auto& c : j.at("contexts")) set.contexts.push_back(context_from_json(c));
  return set;
}

}  // namespace explorego::envs
