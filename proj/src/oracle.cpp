#include "explorego/oracle/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "explorego/check.hpp"

namespace explorego::oracle {

using envs::UnderlyingState;

ReachableSet enumerate_reachable(const envs::Env& env, const envs::ContextSet& train) {
  ReachableSet out;
  std::deque<UnderlyingState> frontier;
  auto push = [&](const UnderlyingState& s) {
    if (out.index.insert(s).second) {
      out.states.push_back(s);
      if (!envs::is_terminal(s)) {
        ++out.non_terminal_count;
        frontier.push_back(s);
      }
    }
  };
  for (const auto& ctx : train.contexts) push(env.initial_state(ctx));
  while (!frontier.empty()) {
    const UnderlyingState s = frontier.front();
    frontier.pop_front();
    for (int a = 0; a < env.action_count(); ++a) push(env.step(s, a).next);
  }
  return out;
}

double OracleTables::v(const UnderlyingState& s) const {
  if (envs::is_terminal(s)) return 0.0;
  return v_star.at(s);
}

int OracleTables::greedy_action(const UnderlyingState& s) const {
  const auto& q = q_star.at(s);
  return static_cast<int>(std::max_element(q.begin(), q.end()) - q.begin());
}

double OracleTables::bellman_residual(const envs::Env& env) const {
  double residual = 0.0;
  for (const auto& [s, q] : q_star) {
    for (int a = 0; a < static_cast<int>(q.size()); ++a) {
      const auto r = env.step(s, a);
      double next_v = 0.0;
      if (!r.done) {
        const auto it = v_star.find(r.next);
        if (it != v_star.end()) next_v = it->second;
      }
      const double backup = r.reward + gamma * next_v;
      residual = std::max(residual, std::abs(q[a] - backup));
    }
  }
  return residual;
}

OracleTables value_iteration(const envs::Env& env, const ReachableSet& states,
                             double gamma, double tol) {
  check(gamma >= 0.0 && gamma < 1.0, "value_iteration discount outside [0,1)");
  check(tol > 0.0, "value_iteration tolerance must be positive");

  OracleTables tables;
  tables.gamma = gamma;
  tables.tol = tol;

  const int n_actions = env.action_count();
  std::vector<const UnderlyingState*> non_terminal;
  std::unordered_map<UnderlyingState, size_t, envs::StateHash> slot;
  for (const auto& s : states.states) {
    if (envs::is_terminal(s)) continue;
    slot.emplace(s, non_terminal.size());
    non_terminal.push_back(&s);
  }

  // Cache one-step dynamics so repeated sweeps stay cheap. next_slot is -1
  // when the successor is terminal or outside the restricted state set.
  struct Edge { float reward = 0; ptrdiff_t next_slot = -1; };
  std::vector<Edge> edges(non_terminal.size() * n_actions);
  for (size_t i = 0; i < non_terminal.size(); ++i) {
    for (int a = 0; a < n_actions; ++a) {
      const auto r = env.step(*non_terminal[i], a);
      Edge& e = edges[i * n_actions + a];
      e.reward = r.reward;
      if (!r.done) {
        const auto it = slot.find(r.next);
        if (it != slot.end()) e.next_slot = static_cast<ptrdiff_t>(it->second);
      }
    }
  }

  std::vector<double> v(non_terminal.size(), 0.0);
  double delta = tol + 1.0;
  while (delta >= tol) {
    delta = 0.0;
    for (size_t i = 0; i < non_terminal.size(); ++i) {
      double best = -1e300;
      for (int a = 0; a < n_actions; ++a) {
        const Edge& e = edges[i * n_actions + a];
        const double next_v = e.next_slot >= 0 ? v[e.next_slot] : 0.0;
        best = std::max(best, double(e.reward) + gamma * next_v);
      }
      delta = std::max(delta, std::abs(best - v[i]));
      v[i] = best;
    }
  }

  for (size_t i = 0; i < non_terminal.size(); ++i) {
    std::vector<double> q(n_actions, 0.0);
    for (int a = 0; a < n_actions; ++a) {
      const Edge& e = edges[i * n_actions + a];
      q[a] = double(e.reward) + gamma * (e.next_slot >= 0 ? v[e.next_slot] : 0.0);
    }
    tables.v_star.emplace(*non_terminal[i], *std::max_element(q.begin(), q.end()));
    tables.q_star.emplace(*non_terminal[i], std::move(q));
  }
  return tables;
}

Reachability classify_context(const envs::Env& /*env*/, const envs::Context& ctx,
                              const envs::ContextSet& train) {
  if (const auto* c = std::get_if<envs::CrossContext>(&ctx)) {
    for (const auto& t : train.contexts)
      if (std::get<envs::CrossContext>(t).background == c->background)
        return Reachability::Reachable;
    return Reachability::Unreachable;
  }
  const auto& f = std::get<envs::FourRoomsContext>(ctx);
  for (const auto& t : train.contexts) {
    const auto& tf = std::get<envs::FourRoomsContext>(t);
    if (tf.doorways == f.doorways && tf.goal_x == f.goal_x && tf.goal_y == f.goal_y)
      return Reachability::Reachable;
  }
  return Reachability::Unreachable;
}

Reachability classify_context(const envs::Env& env, const envs::Context& ctx,
                              const ReachableSet& reachable) {
  return reachable.contains(env.initial_state(ctx)) ? Reachability::Reachable
                                                    : Reachability::Unreachable;
}

Transition sample_random_transition(Rng& rng, const ReachableSet& reachable,
                                    const envs::Env& env) {
  check(reachable.non_terminal_count > 0, "sample_random_transition on empty set");
  // Rejection over the BFS order keeps the draw uniform over non-terminal
  // states without a separate index.
  const UnderlyingState* s = nullptr;
  do {
    s = &reachable.states[rng.uniform_int(reachable.states.size())];
  } while (envs::is_terminal(*s));
  const int a = static_cast<int>(rng.uniform_int(env.action_count()));
  const auto r = env.step(*s, a);

  Transition t;
  t.state = *s;
  t.action = a;
  t.reward = r.reward;
  t.intrinsic = 0.0f;
  t.next_state = r.next;
  t.done = r.done;
  t.injected = true;
  return t;
}

}  // namespace explorego::oracle
