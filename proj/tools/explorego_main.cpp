// Command-line front end: seeded training runs, the K sensitivity sweep,
// tabular-oracle dumps and metric plots.

#include <CLI11.hpp>

#include "explorego/cli/commands.hpp"
#include "explorego/cli/plot.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Contextual-MDP generalisation lab: Explore-Go, TEE and baselines "
               "on the illustrative cross and Four Rooms grid worlds"};
  app.require_subcommand(1);

  std::string config_path, out_path, csv_glob, metric, group_by, k_csv;
  uint64_t seed = 0;
  int n_seeds = 1;

  auto* run = app.add_subcommand("run", "Execute one seeded training run");
  run->add_option("--config", config_path, "JSON config file")->required();
  run->add_option("--seed", seed, "Run seed")->required();
  run->add_option("--out", out_path, "Output directory")->required();

  auto* sweep = app.add_subcommand("sweep-k", "Sensitivity sweep over Explore-Go K");
  sweep->add_option("--config", config_path, "Base JSON config file")->required();
  sweep->add_option("--k", k_csv, "Comma-separated K values, e.g. 25,50,100")->required();
  sweep->add_option("--seeds", n_seeds, "Seeds per K (0..n-1)")->required();
  sweep->add_option("--out", out_path, "Output directory")->required();

  auto* oracle = app.add_subcommand("oracle", "Dump reachable states, V* and Q*");
  oracle->add_option("--config", config_path, "JSON config file")->required();
  oracle->add_option("--out", out_path, "Output JSON path")->required();

  auto* plot = app.add_subcommand("plot", "Aggregate metric CSVs into an SVG chart");
  plot->add_option("--in", csv_glob, "CSV glob, e.g. 'out/*/metrics_*.csv'")->required();
  plot->add_option("--metric", metric, "Metric name, e.g. success_rate")->required();
  plot->add_option("--group-by", group_by,
                   "Config key that labels each run, e.g. explorego.enabled; "
                   "confidence bands are normal-approximation 95% intervals "
                   "(1.96 * sem) across seeds");
  plot->add_option("--out", out_path, "Output SVG path")->required();

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) return explorego::cli::run_command(config_path, seed, out_path);
  if (sweep->parsed()) {
    std::vector<int> k_list;
    try {
      size_t pos = 0;
      while (pos < k_csv.size()) {
        size_t used = 0;
        k_list.push_back(std::stoi(k_csv.substr(pos), &used));
        pos += used;
        if (pos < k_csv.size() && k_csv[pos] == ',') ++pos;
      }
    } catch (const std::exception&) {
      std::fprintf(stderr, "sweep-k: cannot parse --k '%s'\n", k_csv.c_str());
      return 1;
    }
    return explorego::cli::sweep_k_command(config_path, k_list, n_seeds, out_path);
  }
  if (oracle->parsed()) return explorego::cli::oracle_command(config_path, out_path);
  if (plot->parsed())
    return explorego::cli::plot_command(csv_glob, metric, group_by, out_path);
  return 1;
}
