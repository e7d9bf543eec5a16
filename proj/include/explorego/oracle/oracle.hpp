#pragma once

#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "explorego/envs/env.hpp"
#include "explorego/rng.hpp"
#include "explorego/transition.hpp"

namespace explorego::oracle {

/// Every state some policy can encounter when training on the given context
/// set: the breadth-first closure of the train start states under all
/// actions. Terminal states are members but are never expanded.
struct ReachableSet {
  std::vector<envs::UnderlyingState> states;  // BFS discovery order
  std::unordered_set<envs::UnderlyingState, envs::StateHash> index;
  int non_terminal_count = 0;

  bool contains(const envs::UnderlyingState& s) const { return index.count(s) > 0; }
};

ReachableSet enumerate_reachable(const envs::Env& env, const envs::ContextSet& train);

/// Converged optimal value tables over a reachable set. Computed in double
/// so the Bellman residual can be driven below tol even for tight
/// tolerances.
struct OracleTables {
  double gamma = 0.99;
  double tol = 1e-9;
  std::unordered_map<envs::UnderlyingState, std::vector<double>, envs::StateHash> q_star;
  std::unordered_map<envs::UnderlyingState, double, envs::StateHash> v_star;

  double v(const envs::UnderlyingState& s) const;
  int greedy_action(const envs::UnderlyingState& s) const;
  /// max-norm Bellman residual of the stored tables, for verification.
  double bellman_residual(const envs::Env& env) const;
};

/// Value iteration on the deterministic finite MDP restricted to `states`:
/// Q(s,a) <- R(s,a) + gamma * V(s') * (1 - terminal(s')), swept until the
/// max-norm change drops below tol. V(terminal) = 0.
OracleTables value_iteration(const envs::Env& env, const ReachableSet& states,
                             double gamma, double tol = 1e-9);

enum class Reachability { Reachable, Unreachable };

/// A context is Reachable iff its start state lies in the reachable closure
/// of the train contexts. Per-env fast paths avoid re-running the BFS:
/// Cross keys on the background colour, Four Rooms on the (doorways, goal)
/// pair; both agree with the closure definition because positions within a
/// colour/layout group are mutually reachable.
Reachability classify_context(const envs::Env& env, const envs::Context& ctx,
                              const envs::ContextSet& train);

/// Same classification straight from a precomputed reachable set.
Reachability classify_context(const envs::Env& env, const envs::Context& ctx,
                              const ReachableSet& reachable);

/// Uniform non-terminal state and uniform action, stepped once through the
/// env. The result is flagged `injected` so collectors keep it out of the
/// count tables.
Transition sample_random_transition(Rng& rng, const ReachableSet& reachable,
                                    const envs::Env& env);

}  // namespace explorego::oracle
