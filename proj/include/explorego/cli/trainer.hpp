#pragma once

#include <filesystem>
#include <memory>

#include "explorego/cli/config.hpp"
#include "explorego/envs/env.hpp"
#include "explorego/oracle/oracle.hpp"

namespace explorego::cli {

/// Everything a run needs that depends only on the config (not the seed):
/// the environment, the context sets and the tabular ground truth.
struct Experiment {
  std::unique_ptr<envs::Env> env;
  envs::ContextSet train;
  envs::ContextSet reachable_test;  // empty for the illustrative CMDP
  envs::ContextSet unreachable_test;
  oracle::ReachableSet reachable;
  oracle::OracleTables tables;

  double gamma = 0.99;  // the acting algorithm's discount
};

Experiment build_experiment(const RunConfig& cfg);

/// Executes one full training run. Writes into out_dir:
///   config.json               resolved config echo (identical across seeds)
///   metrics_seed<seed>.csv    metric rows, stamped at scheduled checkpoints
///   checkpoint_seed<seed>.json  final network parameters
/// The output is a pure function of (cfg, seed).
void run_experiment(const RunConfig& cfg, uint64_t seed,
                    const std::filesystem::path& out_dir);

}  // namespace explorego::cli
