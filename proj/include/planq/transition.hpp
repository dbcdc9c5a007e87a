#pragma once

#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "planq/ground.hpp"

namespace planq {

/// Programming error: an argument does not belong to the task, or an
/// operation's precondition was ignored by the caller.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Raised by `progress` on an inapplicable action. Carries the missing
/// precondition atoms so callers can explain the failure.
class InapplicableAction : public ContractViolation {
 public:
  InapplicableAction(ActionId action, std::vector<AtomId> missing)
      : ContractViolation("action " + std::to_string(action) + " is not applicable"),
        action_(action),
        missing_(std::move(missing)) {}
  ActionId action() const { return action_; }
  const std::vector<AtomId>& missing() const { return missing_; }

 private:
  ActionId action_;
  std::vector<AtomId> missing_;
};

bool is_applicable(const GroundTask& task, const State& s, ActionId a);
std::vector<ActionId> applicable_actions(const GroundTask& task, const State& s);
std::vector<AtomId> missing_preconditions(const GroundTask& task, const State& s, ActionId a);

/// s \ del(a) ∪ add(a). Throws InapplicableAction unless pre(a) ⊆ s.
State progress(const GroundTask& task, const State& s, ActionId a);

bool is_goal(const GroundTask& task, const State& s);

/// The four-way split of the atom universe around one transition s -> t.
struct FactPartition {
  AtomSet kept;       // s ∩ t
  AtomSet deleted;    // s \ t
  AtomSet added;      // t \ s
  AtomSet untouched;  // F \ (s ∪ t)
};

FactPartition fact_partition(const GroundTask& task, const State& s, ActionId a);

struct SequenceVerdict {
  bool valid = false;
  bool applicable = false;
  bool goal_reaching = false;
  /// First failing position; equals the sequence length when the only
  /// failure is that the goal does not hold at the end.
  std::optional<std::size_t> failure_index;
};

struct SequenceResult {
  SequenceVerdict verdict;
  std::optional<State> final_state;  // set when applicable
  std::vector<AtomId> missing;       // unmet preconditions at the failure, if any
};

using ActionResolver = std::function<std::optional<ActionId>(std::string_view)>;

/// Resolves `(schema obj ...)` names.
ActionResolver pddl_resolver(const GroundTask& task);

SequenceResult apply_sequence(const GroundTask& task, const State& s, std::span<const std::string> names,
                              const ActionResolver& resolve);
SequenceResult apply_actions(const GroundTask& task, const State& s, std::span<const ActionId> actions);

/// States visited by an applicable action sequence, s first.
std::vector<State> state_trace(const GroundTask& task, const State& s, std::span<const ActionId> actions);

}  // namespace planq
