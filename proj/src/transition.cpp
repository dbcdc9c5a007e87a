#include "planq/transition.hpp"

namespace planq {

namespace {

const GroundAction& action_of(const GroundTask& task, ActionId a) {
  if (a >= task.actions.size()) throw ContractViolation("action id " + std::to_string(a) + " is not part of the task");
  return task.actions[a];
}

void check_state(const GroundTask& task, const State& s) {
  if (s.universe_size() != task.num_atoms()) throw ContractViolation("state does not belong to the task");
}

}  // namespace

bool is_applicable(const GroundTask& task, const State& s, ActionId a) {
  check_state(task, s);
  for (auto p : action_of(task, a).pre)
    if (!s.contains(p)) return false;
  return true;
}

std::vector<ActionId> applicable_actions(const GroundTask& task, const State& s) {
  check_state(task, s);
  std::vector<ActionId> out;
  for (const auto& a : task.actions) {
    bool ok = true;
    for (auto p : a.pre)
      if (!s.contains(p)) {
        ok = false;
        break;
      }
    if (ok) out.push_back(a.id);
  }
  return out;
}

std::vector<AtomId> missing_preconditions(const GroundTask& task, const State& s, ActionId a) {
  check_state(task, s);
  std::vector<AtomId> out;
  for (auto p : action_of(task, a).pre)
    if (!s.contains(p)) out.push_back(p);
  return out;
}

State progress(const GroundTask& task, const State& s, ActionId a) {
  auto missing = missing_preconditions(task, s, a);
  if (!missing.empty()) throw InapplicableAction(a, std::move(missing));
  const auto& ga = task.actions[a];
  State t = s;
  for (auto d : ga.del) t.erase(d);
  for (auto x : ga.add) t.insert(x);
  return t;
}

bool is_goal(const GroundTask& task, const State& s) {
  check_state(task, s);
  return task.goal.is_subset_of(s);
}

FactPartition fact_partition(const GroundTask& task, const State& s, ActionId a) {
  const State t = progress(task, s, a);
  AtomSet all(task.num_atoms());
  for (AtomId i = 0; i < task.num_atoms(); ++i) all.insert(i);
  return {s & t, s - t, t - s, all - (s | t)};
}

ActionResolver pddl_resolver(const GroundTask& task) {
  return [&task](std::string_view name) { return task.find_action(name); };
}

SequenceResult apply_sequence(const GroundTask& task, const State& s, std::span<const std::string> names,
                              const ActionResolver& resolve) {
  std::vector<ActionId> ids;
  ids.reserve(names.size());
  for (std::size_t i = 0; i < names.size(); ++i) {
    auto id = resolve(names[i]);
    if (!id) {
      SequenceResult r;
      r.verdict.failure_index = i;
      return r;
    }
    ids.push_back(*id);
  }
  return apply_actions(task, s, ids);
}

SequenceResult apply_actions(const GroundTask& task, const State& s, std::span<const ActionId> actions) {
  check_state(task, s);
  SequenceResult r;
  r.verdict.valid = true;
  State cur = s;
  for (std::size_t i = 0; i < actions.size(); ++i) {
    auto missing = missing_preconditions(task, cur, actions[i]);
    if (!missing.empty()) {
      r.verdict.failure_index = i;
      r.missing = std::move(missing);
      return r;
    }
    cur = progress(task, cur, actions[i]);
  }
  r.verdict.applicable = true;
  r.verdict.goal_reaching = task.goal.is_subset_of(cur);
  if (!r.verdict.goal_reaching) r.verdict.failure_index = actions.size();
  r.final_state = std::move(cur);
  return r;
}

std::vector<State> state_trace(const GroundTask& task, const State& s, std::span<const ActionId> actions) {
  std::vector<State> trace{s};
  for (auto a : actions) trace.push_back(progress(task, trace.back(), a));
  return trace;
}

}  // namespace planq
