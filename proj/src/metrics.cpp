#include "explorego/metrics/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <unordered_set>

#include "explorego/check.hpp"

namespace explorego::metrics {

double coverage(const VisitedSet& visited, const oracle::ReachableSet& reachable,
                int action_count) {
  check(reachable.non_terminal_count > 0, "coverage over an empty reachable set");
  size_t hit = 0;
  for (const auto& s : reachable.states) {
    if (envs::is_terminal(s)) continue;
    for (int a = 0; a < action_count; ++a)
      if (visited.contains(s, a)) ++hit;
  }
  return static_cast<double>(hit) /
         (static_cast<double>(reachable.non_terminal_count) * action_count);
}

double buffer_diversity(const agents::ReplayBuffer& buffer,
                        const oracle::ReachableSet& reachable) {
  if (reachable.non_terminal_count == 0) return 0.0;
  std::unordered_set<envs::UnderlyingState, envs::StateHash> distinct;
  for (const auto& t : buffer)
    if (reachable.contains(t.state)) distinct.insert(t.state);
  return static_cast<double>(distinct.size()) / reachable.non_terminal_count;
}

double value_error(const envs::Env& env, const neural::Mlp<float>& q_net,
                   const oracle::OracleTables& tables,
                   const oracle::ReachableSet& reachable) {
  std::vector<float> obs(static_cast<size_t>(env.obs_shape().size()));
  std::vector<float> q;
  double total = 0.0;
  size_t n = 0;
  for (const auto& s : reachable.states) {
    if (envs::is_terminal(s)) continue;
    env.encode(s, obs);
    neural::forward<float>(q_net, obs, q);
    const double greedy_value = *std::max_element(q.begin(), q.end());
    total += std::abs(greedy_value - tables.v(s));
    ++n;
  }
  return n == 0 ? 0.0 : total / static_cast<double>(n);
}

EvalResult evaluate(const envs::Env& env, const GreedyPolicy& policy,
                    const envs::ContextSet& contexts, int episodes, double gamma,
                    Rng& rng) {
  check(episodes >= 1, "evaluate needs at least one episode");
  check(!contexts.contexts.empty(), "evaluate needs a non-empty context set");

  std::vector<float> obs(static_cast<size_t>(env.obs_shape().size()));
  EvalResult out;
  for (int ep = 0; ep < episodes; ++ep) {
    const auto& ctx = contexts.contexts[rng.uniform_int(contexts.contexts.size())];
    envs::UnderlyingState s = env.initial_state(ctx);
    double disc = 1.0;
    for (int step = 0; step < env.timeout(); ++step) {
      env.encode(s, obs);
      const auto result = env.step(s, policy(obs));
      out.mean_return += result.reward;
      out.mean_disc_return += disc * result.reward;
      disc *= gamma;
      s = result.next;
      if (result.done) {
        out.success_rate += 1.0;
        break;
      }
    }
  }
  out.success_rate /= episodes;
  out.mean_return /= episodes;
  out.mean_disc_return /= episodes;
  return out;
}

void CsvWriter::append(const MetricRecord& r) {
  if (!header_written_) {
    *out_ << "step,seed,split,metric,value\n";
    header_written_ = true;
  }
  char value[64];
  std::snprintf(value, sizeof(value), "%.17g", r.value);
  *out_ << r.step << ',' << r.seed << ',' << r.split << ',' << r.metric << ',' << value
        << '\n';
}

bool parse_csv_row(const std::string& line, MetricRecord& out) {
  size_t pos = 0;
  auto next_field = [&](std::string& field) {
    const size_t comma = line.find(',', pos);
    if (comma == std::string::npos) return false;
    field = line.substr(pos, comma - pos);
    pos = comma + 1;
    return true;
  };
  std::string step, seed;
  if (!next_field(step) || !next_field(seed) || !next_field(out.split) ||
      !next_field(out.metric))
    return false;
  try {
    out.step = std::stoull(step);
    out.seed = std::stoull(seed);
    out.value = std::stod(line.substr(pos));
  } catch (const std::exception&) {
    return false;
  }
  return true;
}

}  // namespace explorego::metrics
