#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "planq/plan.hpp"

namespace planq {

struct RelaxedReachability {
  State from_state;
  AtomSet reachable_atoms;
  std::vector<bool> reachable_actions;  // indexed by action id

  bool atom(AtomId a) const { return reachable_atoms.contains(a); }
  bool action(ActionId a) const { return reachable_actions[a]; }
};

/// Precondition index reused across many delete-relaxed explorations of
/// the same task.
class RelaxedExplorer {
 public:
  explicit RelaxedExplorer(const GroundTask& task);

  /// Least fixpoint of relaxed application from `s`. Actions flagged in
  /// `excluded` (if given) are never applied.
  RelaxedReachability explore(const State& s, const std::vector<bool>* excluded = nullptr) const;

  /// Additive heuristic value of the task goal from `s`; -1 if the goal is
  /// not relaxed-reachable. Unit action costs.
  long h_add(const State& s) const;

  const GroundTask& task() const { return task_; }

 private:
  const GroundTask& task_;
  std::vector<std::vector<ActionId>> pre_of_;  // atom -> actions having it as a precondition
  std::vector<ActionId> no_pre_;               // actions with an empty precondition
};

RelaxedReachability relaxed_reachable(const GroundTask& task, const State& s);

/// Pairwise mutexes from the h² fixpoint seeded at the task init. A pair is
/// reported only when both atoms are individually reachable but never
/// co-achieved.
class MutexSet {
 public:
  MutexSet() = default;
  MutexSet(std::size_t universe, std::vector<std::pair<AtomId, AtomId>> pairs);

  bool is_mutex(AtomId p, AtomId q) const;
  const std::vector<std::pair<AtomId, AtomId>>& pairs() const { return pairs_; }
  /// Pairs (p, q) with p < q that are co-reachable under h²; only
  /// meaningful for atoms reachable individually.
  std::size_t size() const { return pairs_.size(); }

 private:
  std::size_t n_ = 0;
  std::vector<std::pair<AtomId, AtomId>> pairs_;  // sorted, p < q
};

MutexSet compute_mutexes(const GroundTask& task);

struct LandmarkSet {
  State for_state;
  /// Fact landmarks not already true in for_state.
  AtomSet landmarks;
  /// Set when the goal is not relaxed-reachable; landmarks is then empty.
  bool goal_unreachable = false;
  /// For each landmark, the landmark whose first achievers all require it;
  /// goal atoms map to themselves.
  std::map<AtomId, AtomId> parent;
};

/// Backchaining from the unsatisfied goal atoms over first achievers in the
/// delete relaxation: the shared preconditions of all first achievers of a
/// landmark are landmarks too.
LandmarkSet landmarks_rhw(const GroundTask& task, const State& s);

/// Atoms missing from the trace of at least one plan, mapped to the index
/// of the first such plan. Throws ContractViolation if any plan is not a
/// goal-reaching plan from s.
std::map<AtomId, std::size_t> landmark_negatives(const GroundTask& task, const State& s,
                                                 std::span<const Plan> plans);

struct Removal {
  std::size_t index = 0;
  std::size_t count = 1;  // 1 = single action, 2 = consecutive pair
};

/// True iff the plan with the indicated action(s) removed is still a plan
/// from s.
bool justification_check(const GroundTask& task, const State& s, std::span<const ActionId> plan, Removal r);

/// Cuts the plan two actions after the first goal state on its trace,
/// unless the cut sequence would not be a plan.
std::vector<ActionId> truncate_after_goal(const GroundTask& task, const State& s, std::span<const ActionId> plan);

}  // namespace planq
