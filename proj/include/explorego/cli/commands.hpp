#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "explorego/cli/config.hpp"

namespace explorego::cli {

/// `run` subcommand: one seeded training run into out_dir. Returns an exit
/// code; configuration problems are reported with their field path.
int run_command(const std::filesystem::path& config_path, uint64_t seed,
                const std::filesystem::path& out_dir);

/// `oracle` subcommand: dumps the reachable-set layout, a V* histogram,
/// the classification of every configured test context and the full
/// {states, V*, Q*} tables keyed by canonical state strings.
int oracle_command(const std::filesystem::path& config_path,
                   const std::filesystem::path& out_path);

/// `sweep-k` subcommand: reruns the base config with Explore-Go enabled for
/// each K in k_list and seeds 0..n_seeds-1 (independent runs, executed in
/// parallel), then aggregates each run's final unreachable-test success
/// into <out_dir>/sweep_summary.csv.
int sweep_k_command(const std::filesystem::path& config_path,
                    const std::vector<int>& k_list, int n_seeds,
                    const std::filesystem::path& out_dir);

}  // namespace explorego::cli
