#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "planq/analysis.hpp"
#include "planq/oracle.hpp"
#include "planq/render.hpp"
#include "planq/sample.hpp"
#include "json.hpp"

namespace planq {

enum class Task { app, prog, reach, areach, val, just, land };
enum class QType { boolean, mcq };

inline constexpr std::array<Task, 7> kAllTasks{Task::app,  Task::prog, Task::reach, Task::areach,
                                               Task::val,  Task::just, Task::land};

std::string_view task_id(Task t);
std::optional<Task> parse_task(std::string_view id);
std::string_view qtype_id(QType q);
std::optional<QType> parse_qtype(std::string_view id);
/// Whether the task's context includes the goal description.
bool task_needs_goal(Task t);

struct QuestionRecord {
  std::string id;
  std::string domain;
  std::string problem_file;
  Task task = Task::app;
  QType qtype = QType::boolean;
  std::string context;
  std::string question;
  std::vector<std::string> options;  // mcq only, stored without a final period
  bool gold_yes = false;             // bool
  int gold_index = -1;               // mcq
  std::string rationale;
  std::string provenance;
  std::uint64_t seed = 0;
  std::vector<std::string> state;  // dynamic atoms of the question state, PDDL syntax
  nlohmann::json check;            // structured payload replayed by verify

  // Generation scratch, not serialized: per-option explanation lines and
  // the rationale preamble for mcq records before positions are fixed.
  std::vector<std::string> option_notes;
  std::string rationale_head;
};

/// Letter for an mcq position.
inline char option_letter(std::size_t i) { return static_cast<char>('A' + i); }

/// Moves options (and their notes and check entries) so that position i
/// holds the option formerly at order[i], then writes the rationale.
void place_options(QuestionRecord& r, const std::array<int, 4>& order);

/// Stable content hash (hex).
std::string record_id(const QuestionRecord& r);

// Question phrasings, shared with the verifier.
namespace phrasing {
std::string app_bool(const std::string& action);
std::string app_mcq();
std::string prog_bool(const std::string& fact, const std::string& action);
std::string prog_mcq(const std::string& action);
std::string reach_bool(const std::string& facts);
std::string reach_mcq();
std::string areach_bool(const std::string& action);
std::string areach_mcq();
enum class ValClaim { valid, applicable, plan };
std::string val_bool(ValClaim claim, const std::vector<std::string>& sequence);
std::string val_mcq(const std::vector<std::string>& sequence);
/// Fixed options: not valid, not applicable, applicable but not a plan, a plan.
const std::array<std::string, 4>& val_options();
std::string just_bool(const std::vector<std::string>& plan, const std::vector<std::string>& removed);
std::string just_mcq(const std::vector<std::string>& plan, bool pairs);
std::string land_bool(const std::string& fact);
std::string land_mcq();
/// "X and Y" for a conjunction of two facts or a pair of actions.
std::string conjunction(const std::vector<std::string>& parts);
std::string sequence_text(const std::vector<std::string>& actions);
}  // namespace phrasing

struct GenOptions {
  /// Progression mcq options as conjunctions of two facts.
  bool prog_pairs = false;
  std::size_t rollouts = 8;       // per state, for reachability positives
  std::size_t rollout_depth = 5;
  std::size_t num_plans = 20;     // plans per state for val/just/land
  std::size_t plan_slack = 2;
};

/// Everything the generators need about one problem.
class ProblemContext {
 public:
  ProblemContext(std::string domain, std::string problem_file, const GroundTask& task, const Renderer& renderer,
                 const OracleIndex* oracle, GenOptions options = {});

  const std::string& domain() const { return domain_; }
  const std::string& problem_file() const { return problem_file_; }
  const GroundTask& task() const { return task_; }
  const Renderer& renderer() const { return renderer_; }
  const OracleIndex* oracle() const { return oracle_; }
  const GenOptions& options() const { return options_; }
  const RelaxedExplorer& explorer() const { return explorer_; }
  const MutexSet& mutexes() const { return mutexes_; }

  /// Dynamic atoms that survived grounding (relaxed-reachable from init).
  const std::vector<AtomId>& live_atoms() const { return live_; }

  PlanSearchResult plans_from(const State& s, std::uint64_t seed) const;

 private:
  std::string domain_, problem_file_;
  const GroundTask& task_;
  const Renderer& renderer_;
  const OracleIndex* oracle_;
  GenOptions options_;
  RelaxedExplorer explorer_;
  MutexSet mutexes_;
  std::vector<AtomId> live_;
};

// Each generator returns zero or more records for one state (empty when
// the state cannot support the question type). Mcq records come with the
// gold option first; batch assembly places it.
std::vector<QuestionRecord> gen_applicability(const ProblemContext& ctx, const State& s, std::uint64_t seed, QType q);
std::vector<QuestionRecord> gen_progression(const ProblemContext& ctx, const State& s, std::uint64_t seed, QType q);
std::vector<QuestionRecord> gen_reachability(const ProblemContext& ctx, const State& s, std::uint64_t seed, QType q);
std::vector<QuestionRecord> gen_action_reachability(const ProblemContext& ctx, const State& s, std::uint64_t seed,
                                                    QType q);
std::vector<QuestionRecord> gen_validation(const ProblemContext& ctx, const State& s, const std::vector<Plan>& plans,
                                           std::uint64_t seed, QType q);
std::vector<QuestionRecord> gen_justification(const ProblemContext& ctx, const State& s, const std::vector<Plan>& plans,
                                              std::uint64_t seed, QType q);
std::vector<QuestionRecord> gen_landmarks(const ProblemContext& ctx, const State& s, const std::vector<Plan>& plans,
                                          std::uint64_t seed, QType q);

/// Dispatches to the generator for `t`, finding plans when it needs them.
std::vector<QuestionRecord> generate_for_state(Task t, const ProblemContext& ctx, const State& s, std::uint64_t seed,
                                               QType q);

/// Bool record for a specific action; used for worked examples.
QuestionRecord make_applicability_bool(const ProblemContext& ctx, const State& s, ActionId a, std::uint64_t seed);

struct GenBatch {
  std::vector<Task> tasks{kAllTasks.begin(), kAllTasks.end()};
  std::vector<QType> qtypes{QType::boolean, QType::mcq};
  std::size_t per_domain = 10;  // per (domain, task, qtype)
  std::uint64_t seed = 0;
  SampleConfig sample;
  GenOptions gen;
};

struct DomainProblems {
  std::string domain;
  std::vector<const ProblemContext*> problems;
};

struct UnderFill {
  std::string domain;
  Task task;
  QType qtype;
  std::size_t wanted, got;
};

struct BatchResult {
  std::vector<QuestionRecord> records;
  std::vector<UnderFill> under_fills;
};

/// Samples states per problem, runs the generators round-robin across
/// problems, balances bool labels and mcq gold positions, dedupes.
BatchResult assemble_batch(const std::vector<DomainProblems>& domains, const GenBatch& cfg);

}  // namespace planq
