#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "planq/atom_set.hpp"
#include "planq/pddl.hpp"

namespace planq {

class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PredicateInfo {
  std::string name;
  std::vector<std::string> param_types;
  bool is_static = false;  // never added or deleted by any schema
  bool is_type = false;    // compiled from a :types declaration
};

struct SchemaInfo {
  std::string name;
  std::vector<std::string> param_names;
  std::vector<std::string> param_types;
};

struct Atom {
  std::uint32_t predicate = 0;
  std::vector<ObjectId> args;
  friend bool operator==(const Atom&, const Atom&) = default;
};

struct GroundAction {
  ActionId id = 0;
  std::uint32_t schema = 0;
  std::vector<ObjectId> args;
  std::vector<AtomId> pre;  // sorted
  std::vector<AtomId> add;  // sorted
  std::vector<AtomId> del;  // sorted
};

/// Grounded STRIPS task. Immutable after grounding.
///
/// The atom universe holds every type-consistent instantiation of every
/// predicate (types compiled to static unary predicates). Atoms that are not
/// delete-relaxed reachable from the initial state are kept but flagged
/// `pruned`; the action set only contains relaxed-reachable instantiations.
class GroundTask {
 public:
  std::string domain_name;
  std::string problem_name;

  std::vector<std::string> objects;
  std::vector<std::string> object_types;  // declared (most specific) type
  std::vector<PredicateInfo> predicates;
  std::vector<SchemaInfo> schemas;
  std::vector<Atom> atoms;
  std::vector<bool> pruned;
  std::vector<GroundAction> actions;

  State init;
  AtomSet goal;
  std::vector<AtomId> goal_order;  // as written in the problem file

  AtomSet static_true;   // static atoms true initially
  AtomSet static_false;  // static atoms false initially: never reachable
  AtomSet dynamic;       // atoms of non-static predicates

  std::size_t num_atoms() const { return atoms.size(); }
  std::size_t num_actions() const { return actions.size(); }
  AtomSet empty_set() const { return AtomSet(atoms.size()); }

  std::optional<ObjectId> find_object(std::string_view name) const;
  std::optional<std::uint32_t> find_predicate(std::string_view name) const;
  std::optional<AtomId> find_atom(std::uint32_t predicate, const std::vector<ObjectId>& args) const;
  /// Looks up an atom written as `(pred a b)`.
  std::optional<AtomId> find_atom(std::string_view pddl) const;
  /// Looks up an action written as `(schema a b)`.
  std::optional<ActionId> find_action(std::string_view pddl) const;

  std::string atom_name(AtomId a) const;
  std::string action_name(ActionId a) const;

  /// Objects that belong to a type (subtypes included), declaration order.
  std::vector<ObjectId> objects_of_type(std::string_view type) const;

  /// State whose non-static atoms are `dynamic_atoms`; statics from init.
  State make_state(const std::vector<AtomId>& dynamic_atoms) const;

  const pddl::LiftedDomain& lifted_domain() const { return domain_; }

 private:
  friend GroundTask ground_task(const pddl::LiftedDomain&, const pddl::LiftedProblem&, const struct GroundOptions&);
  pddl::LiftedDomain domain_;
  std::unordered_map<std::string, AtomId> atom_index_;
  std::unordered_map<std::string, ActionId> action_index_;
  std::unordered_map<std::string, ObjectId> object_index_;
};

struct GroundOptions {
  std::size_t max_atoms = 2'000'000;
  std::size_t max_actions = 2'000'000;
};

GroundTask ground_task(const pddl::LiftedDomain& domain, const pddl::LiftedProblem& problem,
                       const GroundOptions& options = {});

/// Split of the static atoms: true initially (always true) and false
/// initially (never true).
struct StaticAtoms {
  AtomSet true_in_init;
  AtomSet false_in_init;
};

StaticAtoms static_atoms(const GroundTask& task);

}  // namespace planq
