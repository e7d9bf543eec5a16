#include "explorego/cli/config.hpp"

#include <fstream>
#include <nlohmann/json.hpp>

#include "explorego/check.hpp"

namespace explorego::cli {

using nlohmann::json;

namespace {

const char* to_string(collector::PePolicy p) {
  switch (p) {
    case collector::PePolicy::Uniform: return "uniform";
    case collector::PePolicy::UGreedy: return "u_greedy";
    case collector::PePolicy::PurePpo: return "pure_ppo";
  }
  return "?";
}

collector::PePolicy pe_policy_from_string(const std::string& s) {
  if (s == "uniform") return collector::PePolicy::Uniform;
  if (s == "u_greedy") return collector::PePolicy::UGreedy;
  if (s == "pure_ppo") return collector::PePolicy::PurePpo;
  throw ConfigError("explorego.pe_policy: unknown policy '" + s + "'");
}

void flatten(const json& j, const std::string& prefix, json& out) {
  for (const auto& [key, value] : j.items()) {
    const std::string path = prefix.empty() ? key : prefix + "." + key;
    if (value.is_object()) {
      flatten(value, path, out);
    } else {
      out[path] = value;
    }
  }
}

}  // namespace

RunConfig default_config(const std::string& env_name, const std::string& algo_name) {
  check_config(env_name == "illustrative" || env_name == "fourrooms",
               "env.name: expected 'illustrative' or 'fourrooms', got '" + env_name + "'");
  check_config(algo_name == "dqn" || algo_name == "ppo",
               "algo.name: expected 'dqn' or 'ppo', got '" + algo_name + "'");

  RunConfig cfg;
  cfg.env.name = env_name;
  cfg.algo.name = algo_name;

  if (env_name == "illustrative") {
    cfg.env.grid_size = 5;
    cfg.contexts = {0, 4, 4};  // fixed sets; kept for the echo
    cfg.train = {50'000, 4, 10'000, 100};
    cfg.dqn.gamma = 0.9;
    cfg.dqn.buffer = 10'000;
    cfg.dqn.batch = 64;
    cfg.dqn.train_freq = 4;
    cfg.dqn.target_interval = 4;
    cfg.dqn.hidden = {128, 64, 32};
    cfg.ppo.lr = 1e-4;
    cfg.ppo.adam_eps = 1e-5;
    cfg.ppo.gamma = 0.9;
    cfg.ppo.rollout_steps = 40;  // 10 timesteps x 4 envs
    cfg.ppo.epochs = 3;
    cfg.ppo.minibatches = 8;
    cfg.ppo.minibatch_size = 0;
    cfg.ppo.beta = 0.0;  // the illustrative PPO uses no intrinsic shaping
    cfg.ppo.share_encoder = false;
    cfg.ppo.grad_clip = 0.5;
    cfg.ppo.hidden = {128, 64, 32};
    cfg.explorego.max_pure_steps = 8;
  } else {
    cfg.env.grid_size = 19;
    cfg.contexts = {1, 200, 200};
    cfg.train = {8'000'000, 50, 100'000, 100};
    // Four Rooms DQN table values.
    cfg.dqn.lr_q = 5e-4;
    cfg.dqn.lr_u = 1e-3;
    cfg.dqn.tau_q = 0.05;
    cfg.dqn.tau_u = 0.005;
    cfg.dqn.beta = 0.01;
    cfg.dqn.buffer = 500'000;
    cfg.dqn.batch = 256;
    cfg.dqn.gamma = 0.99;
    cfg.dqn.train_freq = 50;
    cfg.dqn.target_interval = 50;
    cfg.dqn.grad_clip = 1.0;
    cfg.dqn.hidden = {512, 256};
    // Four Rooms PPO table values.
    cfg.ppo.lr = 5e-4;
    cfg.ppo.adam_eps = 1e-5;
    cfg.ppo.gamma = 0.99;
    cfg.ppo.gae_lambda = 0.95;
    cfg.ppo.clip = 0.2;
    cfg.ppo.entropy_coeff = 0.01;
    cfg.ppo.vf_coeff = 0.5;
    cfg.ppo.epochs = 5;
    cfg.ppo.minibatch_size = 256;
    cfg.ppo.minibatches = 0;
    cfg.ppo.rollout_steps = 12'800;
    cfg.ppo.beta = 0.01;
    cfg.ppo.share_encoder = true;
    cfg.ppo.grad_clip = 0.5;
    cfg.ppo.hidden = {512, 256};
    cfg.explorego.max_pure_steps = 50;
  }

  cfg.explorego.enabled = false;
  cfg.explorego.include_pe = false;
  cfg.explorego.beta_pure = 0.1;
  // Default pure-exploration policy: greedy on the U head for DQN (no extra
  // training needed); for PPO a parallel intrinsic-only agent in Four Rooms
  // and plain uniform actions in the illustrative CMDP.
  if (algo_name == "dqn") {
    cfg.explorego.pe_policy = collector::PePolicy::UGreedy;
  } else {
    cfg.explorego.pe_policy = env_name == "fourrooms" ? collector::PePolicy::PurePpo
                                                      : collector::PePolicy::Uniform;
  }
  return cfg;
}

void validate(const RunConfig& cfg) {
  check_config(cfg.env.name == "illustrative" || cfg.env.name == "fourrooms",
               "env.name: expected 'illustrative' or 'fourrooms'");
  check_config(cfg.algo.name == "dqn" || cfg.algo.name == "ppo",
               "algo.name: expected 'dqn' or 'ppo'");
  if (cfg.env.name == "fourrooms") {
    check_config(cfg.env.grid_size >= 5 && cfg.env.grid_size % 2 == 1,
                 "env.grid_size: must be odd and >= 5");
    check_config(cfg.contexts.n_train >= 1 && cfg.contexts.n_test >= 1,
                 "contexts.n_train / contexts.n_test: must be positive");
  }
  check_config(cfg.train.total_steps >= 1, "train.total_steps: must be positive");
  check_config(cfg.train.n_envs >= 1, "train.n_envs: must be positive");
  check_config(cfg.train.eval_every >= 1, "train.eval_every: must be positive");
  check_config(cfg.train.eval_episodes >= 1, "train.eval_episodes: must be positive");

  check_config(!(cfg.tee.enabled && cfg.explorego.enabled),
               "tee.enabled / explorego.enabled: at most one may be true");
  if (cfg.tee.enabled) {
    check_config(cfg.algo.name == "dqn", "tee.enabled: TEE requires the dqn algorithm");
    check_config(cfg.train.n_envs >= 2, "tee.enabled: TEE needs at least 2 workers");
  }
  if (cfg.explorego.enabled) {
    check_config(cfg.explorego.max_pure_steps >= 0, "explorego.K: must be >= 0");
    if (cfg.algo.name == "dqn")
      check_config(cfg.explorego.pe_policy != collector::PePolicy::PurePpo,
                   "explorego.pe_policy: pure_ppo requires the ppo algorithm");
    else
      check_config(cfg.explorego.pe_policy != collector::PePolicy::UGreedy,
                   "explorego.pe_policy: u_greedy requires the dqn algorithm");
  }
  check_config(cfg.inject.fraction >= 0.0 && cfg.inject.fraction < 1.0,
               "inject.fraction: must lie in [0,1)");
  if (cfg.inject.enabled)
    check_config(cfg.algo.name == "dqn",
                 "inject.enabled: random-transition injection requires a replay buffer");

  if (cfg.algo.name == "dqn") {
    check_config(cfg.dqn.batch >= 1, "dqn.batch: must be positive");
    check_config(cfg.dqn.buffer >= static_cast<size_t>(cfg.dqn.batch),
                 "dqn.buffer: must hold at least one batch");
    check_config(cfg.dqn.train_freq >= 1, "dqn.train_freq: must be positive");
    check_config(cfg.dqn.target_interval >= 1, "dqn.target_interval: must be positive");
    check_config(cfg.dqn.gamma >= 0.0 && cfg.dqn.gamma < 1.0,
                 "dqn.gamma: must lie in [0,1)");
    check_config(cfg.dqn.eps_init >= cfg.dqn.eps_final,
                 "dqn.eps_init: must be >= dqn.eps_final");
    check_config(!cfg.dqn.hidden.empty(), "net.hidden_dims: must be non-empty");
  } else {
    check_config(cfg.ppo.epochs >= 1, "ppo.epochs: must be positive");
    check_config(cfg.ppo.clip > 0.0, "ppo.clip: must be positive");
    check_config(cfg.ppo.rollout_steps >= 1, "ppo.rollout_steps: must be positive");
    check_config((cfg.ppo.minibatch_size > 0) != (cfg.ppo.minibatches > 0),
                 "ppo.batch / ppo.minibatches: exactly one must be positive");
    check_config(cfg.ppo.gamma >= 0.0 && cfg.ppo.gamma < 1.0,
                 "ppo.gamma: must lie in [0,1)");
    check_config(cfg.ppo.gae_lambda >= 0.0 && cfg.ppo.gae_lambda <= 1.0,
                 "ppo.gae_lambda: must lie in [0,1]");
    check_config(!cfg.ppo.hidden.empty(), "net.hidden_dims: must be non-empty");
  }
}

RunConfig config_from_json(const json& input) {
  json flat = json::object();
  flatten(input, "", flat);
  // Keys given in dotted form pass through flatten() unchanged.

  std::string env_name = "fourrooms";
  std::string algo_name = "dqn";
  if (flat.contains("env.name")) env_name = flat["env.name"].get<std::string>();
  if (flat.contains("algo.name")) algo_name = flat["algo.name"].get<std::string>();

  RunConfig cfg = default_config(env_name, algo_name);

  for (const auto& [key, value] : flat.items()) {
    try {
      if (key == "env.name") {
        // already applied
      } else if (key == "algo.name") {
        // already applied
      } else if (key == "env.grid_size") {
        cfg.env.grid_size = value.get<int>();
      } else if (key == "contexts.master_seed") {
        cfg.contexts.master_seed = value.get<uint64_t>();
      } else if (key == "contexts.n_train") {
        cfg.contexts.n_train = value.get<int>();
      } else if (key == "contexts.n_test") {
        cfg.contexts.n_test = value.get<int>();
      } else if (key == "train.total_steps") {
        cfg.train.total_steps = value.get<uint64_t>();
      } else if (key == "train.n_envs") {
        cfg.train.n_envs = value.get<int>();
      } else if (key == "train.eval_every") {
        cfg.train.eval_every = value.get<uint64_t>();
      } else if (key == "train.eval_episodes") {
        cfg.train.eval_episodes = value.get<int>();
      } else if (key == "dqn.lr_q") {
        cfg.dqn.lr_q = value.get<double>();
      } else if (key == "dqn.lr_u") {
        cfg.dqn.lr_u = value.get<double>();
      } else if (key == "dqn.adam_eps") {
        cfg.dqn.adam_eps = value.get<double>();
      } else if (key == "dqn.tau_q") {
        cfg.dqn.tau_q = value.get<double>();
      } else if (key == "dqn.tau_u") {
        cfg.dqn.tau_u = value.get<double>();
      } else if (key == "dqn.beta") {
        cfg.dqn.beta = value.get<double>();
      } else if (key == "dqn.eps_init") {
        cfg.dqn.eps_init = value.get<double>();
      } else if (key == "dqn.eps_final") {
        cfg.dqn.eps_final = value.get<double>();
      } else if (key == "dqn.eps_fraction") {
        cfg.dqn.eps_fraction = value.get<double>();
      } else if (key == "dqn.buffer") {
        cfg.dqn.buffer = value.get<size_t>();
      } else if (key == "dqn.batch") {
        cfg.dqn.batch = value.get<int>();
      } else if (key == "dqn.gamma") {
        cfg.dqn.gamma = value.get<double>();
      } else if (key == "dqn.train_freq") {
        cfg.dqn.train_freq = value.get<int>();
      } else if (key == "dqn.target_interval") {
        cfg.dqn.target_interval = value.get<int>();
      } else if (key == "dqn.grad_clip") {
        cfg.dqn.grad_clip = value.get<double>();
      } else if (key == "ppo.lr") {
        cfg.ppo.lr = value.get<double>();
      } else if (key == "ppo.adam_eps") {
        cfg.ppo.adam_eps = value.get<double>();
      } else if (key == "ppo.gamma") {
        cfg.ppo.gamma = value.get<double>();
      } else if (key == "ppo.gae_lambda") {
        cfg.ppo.gae_lambda = value.get<double>();
      } else if (key == "ppo.clip") {
        cfg.ppo.clip = value.get<double>();
      } else if (key == "ppo.entropy") {
        cfg.ppo.entropy_coeff = value.get<double>();
      } else if (key == "ppo.vf_coeff") {
        cfg.ppo.vf_coeff = value.get<double>();
      } else if (key == "ppo.epochs") {
        cfg.ppo.epochs = value.get<int>();
      } else if (key == "ppo.batch") {
        cfg.ppo.minibatch_size = value.get<int>();
        cfg.ppo.minibatches = 0;
      } else if (key == "ppo.minibatches") {
        cfg.ppo.minibatches = value.get<int>();
        if (cfg.ppo.minibatches > 0) cfg.ppo.minibatch_size = 0;
      } else if (key == "ppo.rollout_steps") {
        cfg.ppo.rollout_steps = value.get<int>();
      } else if (key == "ppo.beta") {
        cfg.ppo.beta = value.get<double>();
      } else if (key == "ppo.share_encoder") {
        cfg.ppo.share_encoder = value.get<bool>();
      } else if (key == "ppo.grad_clip") {
        cfg.ppo.grad_clip = value.get<double>();
      } else if (key == "explorego.enabled") {
        cfg.explorego.enabled = value.get<bool>();
      } else if (key == "explorego.K") {
        cfg.explorego.max_pure_steps = value.get<int>();
      } else if (key == "explorego.pe_policy") {
        cfg.explorego.pe_policy = pe_policy_from_string(value.get<std::string>());
      } else if (key == "explorego.include_pe") {
        cfg.explorego.include_pe = value.get<bool>();
      } else if (key == "explorego.beta_pure") {
        cfg.explorego.beta_pure = value.get<double>();
      } else if (key == "tee.enabled") {
        cfg.tee.enabled = value.get<bool>();
      } else if (key == "tee.phi") {
        cfg.tee.phi = value.get<double>();
      } else if (key == "tee.lambda") {
        cfg.tee.lambda = value.get<double>();
      } else if (key == "tee.alpha") {
        cfg.tee.alpha = value.get<double>();
      } else if (key == "inject.enabled") {
        cfg.inject.enabled = value.get<bool>();
      } else if (key == "inject.fraction") {
        cfg.inject.fraction = value.get<double>();
      } else if (key == "net.hidden_dims") {
        const auto dims = value.get<std::vector<int>>();
        cfg.dqn.hidden = dims;
        cfg.ppo.hidden = dims;
      } else {
        throw ConfigError("unknown config key: " + key);
      }
    } catch (const json::exception& e) {
      throw ConfigError(key + ": " + e.what());
    }
  }

  validate(cfg);
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  check_config(in.good(), "cannot open config file: " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return config_from_json(j);
}

nlohmann::json echo_config(const RunConfig& cfg) {
  json j;
  j["env"] = {{"name", cfg.env.name}, {"grid_size", cfg.env.grid_size}};
  j["contexts"] = {{"master_seed", cfg.contexts.master_seed},
                   {"n_train", cfg.contexts.n_train},
                   {"n_test", cfg.contexts.n_test}};
  j["train"] = {{"total_steps", cfg.train.total_steps},
                {"n_envs", cfg.train.n_envs},
                {"eval_every", cfg.train.eval_every},
                {"eval_episodes", cfg.train.eval_episodes}};
  j["algo"] = {{"name", cfg.algo.name}};
  j["dqn"] = {{"lr_q", cfg.dqn.lr_q},
              {"lr_u", cfg.dqn.lr_u},
              {"adam_eps", cfg.dqn.adam_eps},
              {"tau_q", cfg.dqn.tau_q},
              {"tau_u", cfg.dqn.tau_u},
              {"beta", cfg.dqn.beta},
              {"eps_init", cfg.dqn.eps_init},
              {"eps_final", cfg.dqn.eps_final},
              {"eps_fraction", cfg.dqn.eps_fraction},
              {"buffer", cfg.dqn.buffer},
              {"batch", cfg.dqn.batch},
              {"gamma", cfg.dqn.gamma},
              {"train_freq", cfg.dqn.train_freq},
              {"target_interval", cfg.dqn.target_interval},
              {"grad_clip", cfg.dqn.grad_clip}};
  j["ppo"] = {{"lr", cfg.ppo.lr},
              {"adam_eps", cfg.ppo.adam_eps},
              {"gamma", cfg.ppo.gamma},
              {"gae_lambda", cfg.ppo.gae_lambda},
              {"clip", cfg.ppo.clip},
              {"entropy", cfg.ppo.entropy_coeff},
              {"vf_coeff", cfg.ppo.vf_coeff},
              {"epochs", cfg.ppo.epochs},
              {"batch", cfg.ppo.minibatch_size},
              {"minibatches", cfg.ppo.minibatches},
              {"rollout_steps", cfg.ppo.rollout_steps},
              {"beta", cfg.ppo.beta},
              {"share_encoder", cfg.ppo.share_encoder},
              {"grad_clip", cfg.ppo.grad_clip}};
  j["explorego"] = {{"enabled", cfg.explorego.enabled},
                    {"K", cfg.explorego.max_pure_steps},
                    {"pe_policy", to_string(cfg.explorego.pe_policy)},
                    {"include_pe", cfg.explorego.include_pe},
                    {"beta_pure", cfg.explorego.beta_pure}};
  j["tee"] = {{"enabled", cfg.tee.enabled},
              {"phi", cfg.tee.phi},
              {"lambda", cfg.tee.lambda},
              {"alpha", cfg.tee.alpha}};
  j["inject"] = {{"enabled", cfg.inject.enabled}, {"fraction", cfg.inject.fraction}};
  j["net"] = {{"hidden_dims",
               cfg.algo.name == "dqn" ? cfg.dqn.hidden : cfg.ppo.hidden}};
  return j;
}

}  // namespace explorego::cli
