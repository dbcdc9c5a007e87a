#pragma once

#include <vector>

#include "planq/transition.hpp"

namespace planq {

/// An action sequence together with the states it visits.
struct Plan {
  std::vector<ActionId> actions;
  std::vector<State> trace;  // trace[0] is the root; size = actions + 1
  bool goal_reaching = false;
};

/// Builds the trace for `actions` from `s`. Throws InapplicableAction.
inline Plan make_plan(const GroundTask& task, const State& s, std::vector<ActionId> actions) {
  Plan p;
  p.trace = state_trace(task, s, actions);
  p.actions = std::move(actions);
  p.goal_reaching = is_goal(task, p.trace.back());
  return p;
}

}  // namespace planq
