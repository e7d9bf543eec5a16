#pragma once

#include <functional>
#include <ostream>
#include <string>

#include "explorego/agents/replay.hpp"
#include "explorego/envs/env.hpp"
#include "explorego/metrics/visited.hpp"
#include "explorego/neural/mlp.hpp"
#include "explorego/oracle/oracle.hpp"
#include "explorego/rng.hpp"

namespace explorego::metrics {

/// Fraction of the reachable state-action space encountered so far:
/// |visited ∩ (reachable x A)| / (|reachable non-terminal| * |A|).
double coverage(const VisitedSet& visited, const oracle::ReachableSet& reachable,
                int action_count);

/// Fraction of reachable states currently represented in the replay buffer
/// (distinct source-state keys, duplicates counted once).
double buffer_diversity(const agents::ReplayBuffer& buffer,
                        const oracle::ReachableSet& reachable);

/// Mean absolute error between the agent's greedy state value
/// max_a Q_theta(encode(s), a) and V*(s) over the non-terminal reachable
/// states.
double value_error(const envs::Env& env, const neural::Mlp<float>& q_net,
                   const oracle::OracleTables& tables,
                   const oracle::ReachableSet& reachable);

/// A deterministic evaluation policy: greedy action from an observation.
using GreedyPolicy = std::function<int(std::span<const float>)>;

struct EvalResult {
  double success_rate = 0.0;
  double mean_return = 0.0;       // undiscounted
  double mean_disc_return = 0.0;  // gamma-discounted
};

/// Runs `episodes` evaluation episodes on contexts drawn uniformly from the
/// set: greedy policy, no pure-exploration phase, no learning, no count
/// updates. Success means reward-1 termination before the timeout.
EvalResult evaluate(const envs::Env& env, const GreedyPolicy& policy,
                    const envs::ContextSet& contexts, int episodes, double gamma,
                    Rng& rng);

struct MetricRecord {
  uint64_t step = 0;  // total env steps so far
  uint64_t seed = 0;
  std::string split;   // train | test_reachable | test_unreachable | global
  std::string metric;  // documented vocabulary, see csv_append
  double value = 0.0;
};

/// Appends `step,seed,split,metric,value` rows, writing the header exactly
/// once per sink. Values are printed with enough digits to round-trip.
///
/// Metric vocabulary: success_rate, mean_return, mean_disc_return,
/// coverage_sa, buffer_diversity, value_error, loss_q, loss_u, loss_policy,
/// loss_value, entropy, pe_fraction.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(&out) {}

  void append(const MetricRecord& record);

 private:
  std::ostream* out_;
  bool header_written_ = false;
};

/// Parses one data row written by CsvWriter (used by the plot tool and
/// round-trip tests). Returns false on the header or malformed lines.
bool parse_csv_row(const std::string& line, MetricRecord& out);

}  // namespace explorego::metrics
