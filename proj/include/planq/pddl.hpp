#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

/// Lifted PDDL model for the STRIPS + :typing fragment.
namespace planq::pddl {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int line, int column, const std::string& source = "")
      : std::runtime_error((source.empty() ? "" : source + ":") + std::to_string(line) + ":" + std::to_string(column) +
                           ": " + what),
        detail_(what),
        line_(line),
        column_(column) {}
  const std::string& detail() const { return detail_; }
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  std::string detail_;
  int line_;
  int column_;
};

/// A construct outside the supported fragment (ADL, numeric fluents, ...).
class UnsupportedError : public ParseError {
 public:
  UnsupportedError(const std::string& construct, int line, int column, const std::string& source = "")
      : ParseError("unsupported construct: " + construct, line, column, source), construct_(construct) {}
  const std::string& construct() const { return construct_; }

 private:
  std::string construct_;
};

/// Well-formed syntax that violates declarations (unknown names, arity, types).
class TypeCheckError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::string_view kRootType = "object";

struct TypedName {
  std::string name;
  std::string type{kRootType};
  friend bool operator==(const TypedName&, const TypedName&) = default;
};

/// Predicate applied to variables (`?x`) or object names.
struct AtomExpr {
  std::string predicate;
  std::vector<std::string> args;
  friend bool operator==(const AtomExpr&, const AtomExpr&) = default;
};

struct PredicateDecl {
  std::string name;
  std::vector<TypedName> params;
  friend bool operator==(const PredicateDecl&, const PredicateDecl&) = default;
};

struct ActionSchema {
  std::string name;
  std::vector<TypedName> parameters;
  std::vector<AtomExpr> precondition;
  std::vector<AtomExpr> add_effects;
  std::vector<AtomExpr> del_effects;
  friend bool operator==(const ActionSchema&, const ActionSchema&) = default;
};

struct TypeDecl {
  std::string name;
  std::string parent;
  friend bool operator==(const TypeDecl&, const TypeDecl&) = default;
};

struct LiftedDomain {
  std::string name;
  std::vector<std::string> requirements;
  std::vector<TypeDecl> types;  // declaration order, root excluded
  std::vector<TypedName> constants;
  std::vector<PredicateDecl> predicates;
  std::vector<ActionSchema> actions;

  bool typed() const { return !types.empty(); }
  const PredicateDecl* find_predicate(std::string_view name) const;
  const ActionSchema* find_action(std::string_view name) const;
  bool has_type(std::string_view type) const;
  /// Reflexive-transitive subtype test.
  bool is_subtype(std::string_view sub, std::string_view super) const;

  friend bool operator==(const LiftedDomain&, const LiftedDomain&) = default;
};

struct LiftedProblem {
  std::string name;
  std::string domain_name;
  std::vector<TypedName> objects;
  std::vector<AtomExpr> init;
  std::vector<AtomExpr> goal;  // conjunction, file order
  friend bool operator==(const LiftedProblem&, const LiftedProblem&) = default;
};

LiftedDomain parse_domain(std::string_view text);
LiftedProblem parse_problem(std::string_view text, const LiftedDomain& domain);

LiftedDomain load_domain(const std::string& path);
LiftedProblem load_problem(const std::string& path, const LiftedDomain& domain);

std::string print_domain(const LiftedDomain& domain);
std::string print_problem(const LiftedProblem& problem);

}  // namespace planq::pddl
