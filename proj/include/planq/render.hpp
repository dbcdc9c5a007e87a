#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "planq/error.hpp"
#include "planq/transition.hpp"

namespace planq {

/// Parsed template file. Grammar: docs/templates.md.
struct TemplateSet {
  enum class Join { list, comma, semicolon, space };

  struct Section {
    std::string name;
    std::string lead;
    Join join = Join::list;
    std::string end = ".";
  };
  struct Predicate {
    std::string fact;
    std::string state;
    std::string section;  // "none" hides the predicate from state text
  };
  struct Group {
    std::string predicate;
    std::size_t by = 0;
    std::string one, many, all;
  };
  struct Merge {
    std::string first, second;
    std::string state;
    std::string section;
  };

  std::string source;
  std::string domain_intro;
  std::string problem_intro;
  std::vector<Section> sections;  // render order
  std::map<std::string, Predicate> predicates;
  std::vector<Group> groups;
  std::vector<Merge> merges;
  std::map<std::string, std::vector<std::string>> actions;          // canonical first
  std::map<std::string, std::vector<std::string>> corrupt_actions;

  static TemplateSet parse(std::string_view text, std::string source = "<string>");
  static TemplateSet load(const std::filesystem::path& path);
};

/// "X", "X and Y", "X, Y, and Z".
std::string join_list(const std::vector<std::string>& items);

/// Whitespace-collapsed, lower-cased, trailing period removed.
std::string normalize_text(std::string_view text);

/// Template set bound to one grounded task. Construction validates that
/// every predicate and schema is covered and that canonical action texts
/// are unique while corrupt texts name no real action.
class Renderer {
 public:
  Renderer(const GroundTask& task, TemplateSet templates);

  const GroundTask& task() const { return *task_; }
  const TemplateSet& templates() const { return tpl_; }

  std::string domain_intro() const;
  std::string problem_intro() const;
  std::string render_state(const State& s) const;
  std::string render_goal() const;
  /// Domain intro, problem intro, state and optionally the goal, separated
  /// by two spaces.
  std::string render_context(const State& s, bool with_goal) const;

  std::string render_fact(AtomId a) const;
  /// Facts joined with join_list.
  std::string render_facts(const std::vector<AtomId>& atoms) const;

  std::string render_action(ActionId a, std::size_t variant = 0) const;
  std::size_t num_action_variants(ActionId a) const;
  std::string render_corrupt_action(ActionId a, std::size_t variant = 0) const;
  std::size_t num_corrupt_variants(ActionId a) const;

  /// Inverse of render_action over all variants; corrupt or unknown texts
  /// give nullopt.
  std::optional<ActionId> parse_action_name(std::string_view text) const;
  ActionResolver resolver() const;

 private:
  std::string fill(const std::string& pattern, const std::vector<ObjectId>& args) const;
  std::string fill_counts(const std::string& pattern) const;

  const GroundTask* task_;
  TemplateSet tpl_;
  std::vector<const TemplateSet::Predicate*> pred_tpl_;  // by predicate index
  std::vector<std::string> type_fact_;                   // for type predicates
  std::unordered_map<std::string, ActionId> by_text_;
};

}  // namespace planq
