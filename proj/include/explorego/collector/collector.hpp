#pragma once

#include <optional>
#include <vector>

#include "explorego/agents/dqn.hpp"
#include "explorego/agents/ppo.hpp"
#include "explorego/agents/replay.hpp"
#include "explorego/envs/env.hpp"
#include "explorego/explore/counts.hpp"
#include "explorego/explore/policies.hpp"
#include "explorego/metrics/visited.hpp"
#include "explorego/oracle/oracle.hpp"

namespace explorego::collector {

enum class PePolicy { Uniform, UGreedy, PurePpo };

struct ExploreGoConfig {
  bool enabled = false;
  int max_pure_steps = 50;  // K; k ~ Uniform{0..K} per episode
  PePolicy pe_policy = PePolicy::Uniform;
  bool include_pe = false;  // ablation: pure-exploration experience enters the buffer
  double beta_pure = 0.1;
};

/// Inclusive-integer uniform draw on {0, 1, ..., K}. K = 0 always yields 0
/// and consumes no RNG state, which makes Explore-Go with K = 0 collapse
/// exactly onto the baseline collector.
int sample_k(Rng& rng, int max_pure_steps);

/// One vectorised-environment slot: the current underlying state, episode
/// clock, this episode's pure-exploration budget k, a private episodic
/// count table and a private RNG stream. Episode boundaries resample the
/// context uniformly from the train set and redraw k.
struct EnvWorker {
  EnvWorker(const envs::Env& env, const envs::ContextSet& train,
            explore::GlobalCounts& counts, Rng rng_stream, int index,
            const ExploreGoConfig& cfg);

  void begin_episode(const envs::Env& env, const envs::ContextSet& train,
                     const ExploreGoConfig& cfg);

  bool in_pure_phase(const ExploreGoConfig& cfg) const {
    return cfg.enabled && episode_step < k;
  }

  int index = 0;
  envs::UnderlyingState state;
  int episode_step = 0;
  int k = 0;
  explore::CountTables counts;
  Rng rng;
  std::optional<double> tee_beta;  // set by tee_wire
};

/// Assigns the schedule's per-worker beta_i; workers keep it for the whole
/// run. Requires one beta per worker.
void tee_wire(std::vector<EnvWorker>& workers, const explore::BetaSchedule& schedule);

/// Total env-step bookkeeping shared by collection and the epsilon schedule.
struct StepClock {
  uint64_t env_steps = 0;
  uint64_t budget = 0;
};

/// Rollout collection with a persistent round-robin cursor over the
/// workers, so collection rounds of any size keep stepping the vectorised
/// envs evenly and deterministically.
class RolloutCollector {
 public:
  RolloutCollector(const envs::Env& env, const envs::ContextSet& train,
                   ExploreGoConfig cfg, std::vector<EnvWorker>* workers,
                   metrics::VisitedSet* visited);

  /// Off-policy collection: steps workers until exactly `n_steps`
  /// post-phase transitions have been gathered; pure-exploration steps do
  /// not count toward n_steps and are returned (flagged) only when the
  /// include_pe ablation is on.
  std::vector<Transition> collect_offpolicy(agents::DqnAgent& agent, int n_steps,
                                            StepClock& clock);

  struct OnPolicyResult {
    agents::Rollout main;
    agents::Rollout pure;
    uint64_t pure_steps = 0;
  };

  /// On-policy collection: takes exactly `total_steps` env steps,
  /// pure-exploration steps included, routing transitions to the pure
  /// rollout during the phase and to the main rollout after it.
  OnPolicyResult collect_onpolicy(agents::PpoAgent& main, agents::PpoAgent* pure_agent,
                                  int total_steps, StepClock& clock);

 private:
  EnvWorker& next_worker();
  int pe_action(EnvWorker& w, agents::DqnAgent* dqn, agents::PpoAgent* pure_agent,
                agents::PpoAgent::ActResult* pure_act);

  const envs::Env& env_;
  const envs::ContextSet& train_;
  ExploreGoConfig cfg_;
  std::vector<EnvWorker>* workers_;
  metrics::VisitedSet* visited_;
  size_t cursor_ = 0;
  std::vector<float> obs_buf_, u_buf_;
};

/// Figure-style random-transition ablation: pushes floor(fraction * n_real)
/// oracle-sampled transitions into the buffer after a collection round.
/// Injected transitions never touch the count tables but do count as
/// visited for the coverage diagnostic.
size_t inject_random_transitions(agents::ReplayBuffer& buffer,
                                 const oracle::ReachableSet& reachable,
                                 const envs::Env& env, Rng& rng, double fraction,
                                 size_t n_real, metrics::VisitedSet* visited);

}  // namespace explorego::collector
