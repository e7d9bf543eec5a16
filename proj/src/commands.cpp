#include "explorego/cli/commands.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <future>
#include <map>
#include <nlohmann/json.hpp>
#include <thread>

#include "explorego/cli/trainer.hpp"
#include "explorego/metrics/metrics.hpp"

namespace explorego::cli {

namespace fs = std::filesystem;
using nlohmann::json;

int run_command(const fs::path& config_path, uint64_t seed, const fs::path& out_dir) {
  try {
    const RunConfig cfg = load_config(config_path);
    run_experiment(cfg, seed, out_dir);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "run: %s\n", e.what());
    return 1;
  }
  return 0;
}

int oracle_command(const fs::path& config_path, const fs::path& out_path) {
  try {
    const RunConfig cfg = load_config(config_path);
    const Experiment ex = build_experiment(cfg);

    json out;
    out["env"] = {{"name", cfg.env.name}, {"grid_size", cfg.env.grid_size}};
    out["gamma"] = ex.gamma;
    out["reachable"] = {
        {"total", ex.reachable.states.size()},
        {"non_terminal", ex.reachable.non_terminal_count},
        {"terminal",
         ex.reachable.states.size() - static_cast<size_t>(ex.reachable.non_terminal_count)}};

    // 10-bin histogram of V* over [0, 1].
    std::array<size_t, 10> bins{};
    for (const auto& [s, v] : ex.tables.v_star) {
      const int bin = std::clamp(static_cast<int>(v * 10.0), 0, 9);
      ++bins[bin];
    }
    json hist = json::object();
    char label[32];
    for (int b = 0; b < 10; ++b) {
      std::snprintf(label, sizeof(label), "[%.1f,%.1f)", b / 10.0, (b + 1) / 10.0);
      hist[label] = bins[b];
    }
    out["v_star_histogram"] = std::move(hist);

    auto classify_set = [&](const envs::ContextSet& set) {
      json arr = json::array();
      for (const auto& ctx : set.contexts) {
        const auto fast = oracle::classify_context(*ex.env, ctx, ex.train);
        arr.push_back(fast == oracle::Reachability::Reachable ? "Reachable"
                                                              : "Unreachable");
      }
      return arr;
    };
    out["classifications"] = {
        {"reachable_test", classify_set(ex.reachable_test)},
        {"unreachable_test", classify_set(ex.unreachable_test)}};

    json states = json::object();
    for (const auto& s : ex.reachable.states) {
      if (envs::is_terminal(s)) {
        states[ex.env->state_key(s)] = {{"v", 0.0}, {"terminal", true}};
        continue;
      }
      states[ex.env->state_key(s)] = {{"v", ex.tables.v_star.at(s)},
                                      {"q", ex.tables.q_star.at(s)}};
    }
    out["states"] = std::move(states);

    if (out_path.has_parent_path()) fs::create_directories(out_path.parent_path());
    std::ofstream f(out_path);
    if (!f.good()) {
      std::fprintf(stderr, "oracle: cannot write %s\n", out_path.string().c_str());
      return 1;
    }
    f << out.dump(2) << '\n';
  } catch (const std::exception& e) {
    std::fprintf(stderr, "oracle: %s\n", e.what());
    return 1;
  }
  return 0;
}

namespace {

/// Last recorded unreachable-test success rate of one run's CSV.
bool final_test_success(const fs::path& csv, double& out) {
  std::ifstream in(csv);
  if (!in.good()) return false;
  std::string line;
  metrics::MetricRecord rec;
  bool found = false;
  while (std::getline(in, line)) {
    if (!metrics::parse_csv_row(line, rec)) continue;
    if (rec.split == "test_unreachable" && rec.metric == "success_rate") {
      out = rec.value;
      found = true;  // rows are step-ordered; keep the last one
    }
  }
  return found;
}

}  // namespace

int sweep_k_command(const fs::path& config_path, const std::vector<int>& k_list,
                    int n_seeds, const fs::path& out_dir) {
  if (k_list.empty()) {
    std::fprintf(stderr, "sweep-k: --k list must be non-empty\n");
    return 1;
  }
  if (n_seeds < 1) {
    std::fprintf(stderr, "sweep-k: --seeds must be positive\n");
    return 1;
  }
  try {
    const RunConfig base = load_config(config_path);

    struct Job {
      int k;
      uint64_t seed;
      fs::path dir;
    };
    std::vector<Job> jobs;
    for (int k : k_list)
      for (int seed = 0; seed < n_seeds; ++seed)
        jobs.push_back({k, static_cast<uint64_t>(seed),
                        out_dir / ("K" + std::to_string(k))});

    // Independent runs; execute a bounded number at a time.
    const size_t parallel = std::max(1u, std::thread::hardware_concurrency());
    for (size_t start = 0; start < jobs.size(); start += parallel) {
      std::vector<std::future<void>> batch;
      for (size_t i = start; i < std::min(jobs.size(), start + parallel); ++i) {
        batch.push_back(std::async(std::launch::async, [&, i] {
          RunConfig cfg = base;
          cfg.explorego.enabled = true;
          cfg.explorego.max_pure_steps = jobs[i].k;
          validate(cfg);
          run_experiment(cfg, jobs[i].seed, jobs[i].dir);
        }));
      }
      for (auto& f : batch) f.get();
    }

    fs::create_directories(out_dir);
    std::ofstream summary(out_dir / "sweep_summary.csv");
    summary << "K,seed,final_test_success\n";
    char value[64];
    for (const auto& job : jobs) {
      double success = 0.0;
      const fs::path csv = job.dir / ("metrics_seed" + std::to_string(job.seed) + ".csv");
      if (!final_test_success(csv, success)) {
        std::fprintf(stderr, "sweep-k: missing results in %s\n", csv.string().c_str());
        return 1;
      }
      std::snprintf(value, sizeof(value), "%.17g", success);
      summary << job.k << ',' << job.seed << ',' << value << '\n';
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "sweep-k: %s\n", e.what());
    return 1;
  }
  return 0;
}

}  // namespace explorego::cli
