#pragma once

#include <filesystem>
#include <nlohmann/json_fwd.hpp>
#include <string>

#include "explorego/agents/dqn.hpp"
#include "explorego/agents/ppo.hpp"
#include "explorego/collector/collector.hpp"

namespace explorego::cli {

/// Resolved experiment configuration. Defaults depend on the (env, algo)
/// pair; every value below can be overridden from a JSON config file given
/// either as nested objects or flat dotted keys.
struct RunConfig {
  struct EnvCfg {
    std::string name = "fourrooms";  // "illustrative" | "fourrooms"
    int grid_size = 19;
  } env;

  struct ContextsCfg {
    uint64_t master_seed = 1;
    int n_train = 200;
    int n_test = 200;
  } contexts;

  struct TrainCfg {
    uint64_t total_steps = 8'000'000;
    int n_envs = 50;
    uint64_t eval_every = 100'000;
    int eval_episodes = 100;
  } train;

  struct AlgoCfg {
    std::string name = "dqn";  // "dqn" | "ppo"
  } algo;

  agents::DqnConfig dqn;
  agents::PpoConfig ppo;
  collector::ExploreGoConfig explorego;

  struct TeeCfg {
    bool enabled = false;
    double phi = 0.5;
    double lambda = 0.9;
    double alpha = 25.0;
  } tee;

  struct InjectCfg {
    bool enabled = false;
    double fraction = 0.1;
  } inject;
};

/// Paper defaults for the given (env, algo) pair.
RunConfig default_config(const std::string& env_name, const std::string& algo_name);

/// Parses, applies over the matching defaults and validates. Unknown keys
/// and inconsistent settings raise ConfigError with the field path.
RunConfig load_config(const std::filesystem::path& path);
RunConfig config_from_json(const nlohmann::json& j);

/// Canonical nested dump with every resolved value explicit; identical
/// configs serialise to identical bytes.
nlohmann::json echo_config(const RunConfig& cfg);

void validate(const RunConfig& cfg);

}  // namespace explorego::cli
