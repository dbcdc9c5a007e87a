#include "planq/taskgen.hpp"

#include <algorithm>
#include <set>

#include "planq/rng.hpp"

namespace planq {

using nlohmann::json;

std::string_view task_id(Task t) {
  switch (t) {
    case Task::app: return "app";
    case Task::prog: return "prog";
    case Task::reach: return "reach";
    case Task::areach: return "areach";
    case Task::val: return "val";
    case Task::just: return "just";
    case Task::land: return "land";
  }
  return "";
}

std::optional<Task> parse_task(std::string_view id) {
  for (auto t : kAllTasks)
    if (task_id(t) == id) return t;
  return std::nullopt;
}

std::string_view qtype_id(QType q) { return q == QType::boolean ? "bool" : "mcq"; }

std::optional<QType> parse_qtype(std::string_view id) {
  if (id == "bool") return QType::boolean;
  if (id == "mcq") return QType::mcq;
  return std::nullopt;
}

bool task_needs_goal(Task t) { return t == Task::val || t == Task::just || t == Task::land; }

namespace phrasing {

std::string conjunction(const std::vector<std::string>& parts) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out += " and ";
    out += parts[i];
  }
  return out;
}

std::string sequence_text(const std::vector<std::string>& actions) {
  std::string out;
  for (std::size_t i = 0; i < actions.size(); ++i) {
    if (i > 0) out += ", ";
    out += actions[i];
  }
  return out;
}

std::string app_bool(const std::string& action) {
  return "Is the following action applicable in this state:  " + action + "?";
}
std::string app_mcq() { return "Which of the following actions will be applicable in this state?"; }
std::string prog_bool(const std::string& fact, const std::string& action) {
  return "Will the fact \"" + fact + "\" hold after performing the action \"" + action + "\" in the current state?";
}
std::string prog_mcq(const std::string& action) {
  return "Which of the following facts hold after performing the action \"" + action + "\" in the current state?";
}
std::string reach_bool(const std::string& facts) {
  return "Is it possible to transition to a state where the following holds: " + facts + "?";
}
std::string reach_mcq() { return "Which of the following options can hold in a state that can potentially be reached?"; }
std::string areach_bool(const std::string& action) {
  return "Is it possible to transition to a state where the action \"" + action + "\" can be applied?";
}
std::string areach_mcq() { return "Which of the following actions can eventually be applied?"; }

std::string val_bool(ValClaim claim, const std::vector<std::string>& sequence) {
  const char* what = claim == ValClaim::valid ? "valid for" : claim == ValClaim::applicable ? "applicable in" : "a plan for";
  return std::string("Is the following sequence of actions ") + what + " the current state? \"" + sequence_text(sequence) +
         "\"";
}
std::string val_mcq(const std::vector<std::string>& sequence) {
  return "Which of the following claims is true with regard to the following sequence of actions \"" +
         sequence_text(sequence) + "\"?";
}
const std::array<std::string, 4>& val_options() {
  static const std::array<std::string, 4> options{
      "The sequence is not valid", "The sequence is not applicable",
      "The sequence is applicable, but does not achieve the goal", "The sequence is a plan"};
  return options;
}

std::string just_bool(const std::vector<std::string>& plan, const std::vector<std::string>& removed) {
  const std::string what = removed.size() == 1 ? "the following action" : "the following pair of consecutive actions";
  return "Given the plan: \"" + sequence_text(plan) + "\"; can " + what +
         " be removed from this plan and still have a valid plan: " + conjunction(removed) + "?";
}
std::string just_mcq(const std::vector<std::string>& plan, bool pairs) {
  return "Given the plan: \"" + sequence_text(plan) + "\"; which of the following " +
         (pairs ? "pairs of consecutive actions" : "actions") + " can be removed from this plan and still have a valid plan?";
}
std::string land_bool(const std::string& fact) {
  return "Is the following fact a landmark (must hold at some point along any plan) for the current state? " + fact;
}
std::string land_mcq() {
  return "Which of the following facts is a landmark (must hold at some point along any plan) for the current state?";
}

}  // namespace phrasing

namespace {

std::uint64_t fnv1a(std::string_view s, std::uint64_t h = 0xcbf29ce484222325ull) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

template <typename T>
std::vector<T> pick_distinct(Rng& rng, const std::vector<T>& pool, std::size_t k) {
  std::vector<T> out;
  for (auto i : rng.sample_indices(pool.size(), k)) out.push_back(pool[i]);
  return out;
}

std::vector<std::string> atom_names(const GroundTask& task, const std::vector<AtomId>& atoms) {
  std::vector<std::string> out;
  for (auto a : atoms) out.push_back(task.atom_name(a));
  return out;
}

std::vector<AtomId> dynamic_part(const GroundTask& task, const std::vector<AtomId>& atoms) {
  std::vector<AtomId> out;
  for (auto a : atoms)
    if (task.dynamic.contains(a)) out.push_back(a);
  return out;
}

QuestionRecord base_record(const ProblemContext& ctx, const State& s, Task t, QType q, std::uint64_t seed) {
  QuestionRecord r;
  r.domain = ctx.domain();
  r.problem_file = ctx.problem_file();
  r.task = t;
  r.qtype = q;
  r.seed = seed;
  r.context = ctx.renderer().render_context(s, task_needs_goal(t));
  s.for_each([&](AtomId a) {
    if (ctx.task().dynamic.contains(a)) r.state.push_back(ctx.task().atom_name(a));
  });
  return r;
}

std::string facts_or_nothing(const Renderer& rd, const std::vector<AtomId>& atoms) {
  return atoms.empty() ? std::string("nothing") : rd.render_facts(atoms);
}


/// Step-by-step account of running a named sequence.
struct SequenceAccount {
  std::string steps;
  SequenceVerdict verdict;
};

SequenceAccount describe_sequence(const ProblemContext& ctx, const State& s, const std::vector<std::string>& texts,
                                  int first_step = 1) {
  const auto& task = ctx.task();
  const auto& rd = ctx.renderer();
  auto result = apply_sequence(task, s, texts, rd.resolver());
  SequenceAccount acc{"", result.verdict};
  int step = first_step;
  auto line = [&](const std::string& text) {
    if (!acc.steps.empty()) acc.steps += '\n';
    acc.steps += "Step " + std::to_string(step++) + ": " + text;
  };
  if (!result.verdict.valid) {
    const auto i = *result.verdict.failure_index;
    line("The action \"" + texts[i] + "\" at position " + std::to_string(i + 1) +
         " is not a valid action in this domain.");
    return acc;
  }
  line(texts.empty() ? "The sequence is empty, so it contains no invalid actions."
                     : "Every action in the sequence is a valid action in this domain.");
  if (!result.verdict.applicable) {
    const auto i = *result.verdict.failure_index;
    line("The action \"" + texts[i] + "\" at position " + std::to_string(i + 1) +
         " is not applicable, since the following fact(s) do not hold in the state where it is applied: " +
         rd.render_facts(dynamic_part(task, result.missing)) + ".");
    return acc;
  }
  line("The actions can be applied one after another, starting from the current state.");
  if (result.verdict.goal_reaching) {
    line("After the sequence, all goal facts hold.");
  } else {
    std::vector<AtomId> unmet;
    for (auto g : task.goal_order)
      if (!result.final_state->contains(g)) unmet.push_back(g);
    line("After the sequence, the following goal fact(s) do not hold: " + rd.render_facts(unmet) + ".");
  }
  return acc;
}

json action_ref(const GroundTask& task, ActionId a, bool corrupt = false, std::size_t variant = 0) {
  return json{{"action", task.action_name(a)}, {"corrupt", corrupt}, {"variant", variant}};
}

std::string render_ref(const Renderer& rd, ActionId a, bool corrupt, std::size_t variant) {
  return corrupt ? rd.render_corrupt_action(a, variant) : rd.render_action(a, variant);
}

}  // namespace

void place_options(QuestionRecord& r, const std::array<int, 4>& order) {
  if (r.options.size() != 4) throw ContractViolation("mcq record needs four options");
  std::vector<std::string> opts(4), notes(r.option_notes.empty() ? 0 : 4);
  json checks = json::array();
  int gold = -1;
  for (int i = 0; i < 4; ++i) {
    opts[i] = r.options[order[i]];
    if (!notes.empty()) notes[i] = r.option_notes[order[i]];
    if (r.check.contains("options")) checks.push_back(r.check["options"][order[i]]);
    if (order[i] == r.gold_index) gold = i;
  }
  r.options = std::move(opts);
  r.option_notes = std::move(notes);
  if (r.check.contains("options")) r.check["options"] = std::move(checks);
  r.gold_index = gold;
  std::string text = r.rationale_head;
  for (std::size_t i = 0; i < r.option_notes.size(); ++i) {
    if (!text.empty()) text += '\n';
    text += std::string(1, option_letter(i)) + ". " + r.option_notes[i];
  }
  if (!text.empty()) text += '\n';
  text += std::string("So, the answer is ") + option_letter(static_cast<std::size_t>(gold)) + ".";
  r.rationale = std::move(text);
}

std::string record_id(const QuestionRecord& r) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  auto mix = [&](std::string_view s) {
    h = fnv1a(s, h);
    h = fnv1a("\x1f", h);
  };
  mix(r.domain);
  mix(r.problem_file);
  mix(task_id(r.task));
  mix(qtype_id(r.qtype));
  for (const auto& a : r.state) mix(a);
  mix(std::to_string(r.seed));
  mix(r.question);
  for (const auto& o : r.options) mix(o);
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

ProblemContext::ProblemContext(std::string domain, std::string problem_file, const GroundTask& task,
                               const Renderer& renderer, const OracleIndex* oracle, GenOptions options)
    : domain_(std::move(domain)), problem_file_(std::move(problem_file)), task_(task), renderer_(renderer),
      oracle_(oracle), options_(options), explorer_(task), mutexes_(compute_mutexes(task)) {
  for (AtomId a = 0; a < task.num_atoms(); ++a)
    if (task.dynamic.contains(a) && !task.pruned[a]) live_.push_back(a);
}

PlanSearchResult ProblemContext::plans_from(const State& s, std::uint64_t seed) const {
  PlanSearchOptions opt;
  opt.slack = options_.plan_slack;
  opt.oracle = oracle_;
  return find_plans(task_, s, options_.num_plans, seed, opt);
}

// ---------------------------------------------------------------- applicability

namespace {

std::string app_rationale(const ProblemContext& ctx, const State& s, ActionId a) {
  const auto& task = ctx.task();
  const auto& rd = ctx.renderer();
  const auto pre = dynamic_part(task, task.actions[a].pre);
  const auto missing = dynamic_part(task, missing_preconditions(task, s, a));
  const std::string name = rd.render_action(a);
  if (pre.empty())
    return "Step 1: The action " + name + " has no preconditions that can change.\nSo, the action is applicable.";
  std::string text = "Step 1: In order to apply the action " + name +
                     ", the following fact(s) must hold in this state: " + rd.render_facts(pre) + ".\n";
  if (missing.empty()) return text + "Step 2: These facts hold in the mentioned state.\nSo, the action is applicable.";
  if (missing.size() == pre.size())
    return text + "Step 2: These facts do not hold in the mentioned state.\nSo, the action is not applicable.";
  return text + "Step 2: The following fact(s) do not hold in the mentioned state: " + rd.render_facts(missing) +
         ".\nSo, the action is not applicable.";
}

std::string app_note(const ProblemContext& ctx, const State& s, ActionId a) {
  const auto missing = dynamic_part(ctx.task(), missing_preconditions(ctx.task(), s, a));
  const std::string name = ctx.renderer().render_action(a);
  if (missing.empty()) return "All preconditions of the action " + name + " hold, so it is applicable.";
  return "The action " + name + " is not applicable, since the following fact(s) do not hold: " +
         ctx.renderer().render_facts(missing) + ".";
}

}  // namespace

QuestionRecord make_applicability_bool(const ProblemContext& ctx, const State& s, ActionId a, std::uint64_t seed) {
  auto r = base_record(ctx, s, Task::app, QType::boolean, seed);
  r.question = phrasing::app_bool(ctx.renderer().render_action(a));
  r.gold_yes = is_applicable(ctx.task(), s, a);
  r.rationale = app_rationale(ctx, s, a);
  r.provenance = r.gold_yes ? "positive: applicable action" : "negative: inapplicable action";
  r.check = action_ref(ctx.task(), a);
  return r;
}

std::vector<QuestionRecord> gen_applicability(const ProblemContext& ctx, const State& s, std::uint64_t seed, QType q) {
  const auto& task = ctx.task();
  Rng rng(seed);
  std::vector<ActionId> yes, no;
  for (const auto& a : task.actions) (is_applicable(task, s, a.id) ? yes : no).push_back(a.id);
  std::vector<QuestionRecord> out;
  if (q == QType::boolean) {
    if (!yes.empty()) out.push_back(make_applicability_bool(ctx, s, rng.pick(yes), seed));
    if (!no.empty()) out.push_back(make_applicability_bool(ctx, s, rng.pick(no), seed));
    return out;
  }
  if (yes.empty() || no.size() < 3) return out;
  std::vector<ActionId> opts{rng.pick(yes)};
  for (auto a : pick_distinct(rng, no, 3)) opts.push_back(a);
  auto r = base_record(ctx, s, Task::app, q, seed);
  r.question = phrasing::app_mcq();
  r.check = json{{"options", json::array()}};
  for (auto a : opts) {
    r.options.push_back(ctx.renderer().render_action(a));
    r.option_notes.push_back(app_note(ctx, s, a));
    r.check["options"].push_back(action_ref(task, a));
  }
  r.gold_index = 0;
  r.rationale_head = "Step 1: Check, for each option, whether the preconditions of the action hold in the current state.";
  r.provenance = "gold: applicable action; distractors: inapplicable actions";
  out.push_back(std::move(r));
  return out;
}

// ---------------------------------------------------------------- progression

namespace {

enum class Cell { kept, added, deleted, untouched };

std::string cell_reason(Cell c) {
  switch (c) {
    case Cell::kept: return "holds in the current state and is not deleted by the action";
    case Cell::added: return "is added by the action";
    case Cell::deleted: return "is deleted by the action";
    case Cell::untouched: return "does not hold in the current state and is not added by the action";
  }
  return "";
}

std::string_view cell_id(Cell c) {
  switch (c) {
    case Cell::kept: return "s and t";
    case Cell::added: return "t minus s";
    case Cell::deleted: return "s minus t";
    case Cell::untouched: return "neither s nor t";
  }
  return "";
}

bool cell_true(Cell c) { return c == Cell::kept || c == Cell::added; }

}  // namespace

std::vector<QuestionRecord> gen_progression(const ProblemContext& ctx, const State& s, std::uint64_t seed, QType q) {
  const auto& task = ctx.task();
  const auto& rd = ctx.renderer();
  Rng rng(seed);
  const auto app = applicable_actions(task, s);
  if (app.empty()) return {};
  const ActionId a = rng.pick(app);
  const State t = progress(task, s, a);
  std::map<Cell, std::vector<AtomId>> cells;
  std::map<AtomId, Cell> cell_of;
  for (auto p : ctx.live_atoms()) {
    const Cell c = s.contains(p) ? (t.contains(p) ? Cell::kept : Cell::deleted)
                                 : (t.contains(p) ? Cell::added : Cell::untouched);
    cells[c].push_back(p);
    cell_of[p] = c;
  }
  const std::string action = rd.render_action(a);
  const std::string effects = "Step 1: Performing the action " + action + " in the current state deletes " +
                              facts_or_nothing(rd, dynamic_part(task, task.actions[a].del)) + " and adds " +
                              facts_or_nothing(rd, dynamic_part(task, task.actions[a].add)) + ".";
  std::vector<QuestionRecord> out;

  if (q == QType::boolean) {
    for (Cell c : {Cell::kept, Cell::added, Cell::deleted, Cell::untouched}) {
      if (cells[c].empty()) continue;
      const AtomId f = rng.pick(cells[c]);
      auto r = base_record(ctx, s, Task::prog, q, seed);
      r.question = phrasing::prog_bool(rd.render_fact(f), action);
      r.gold_yes = cell_true(c);
      r.rationale = effects + "\nStep 2: The fact " + rd.render_fact(f) + " " + cell_reason(c) + ".\nSo, the fact " +
                    (r.gold_yes ? "will" : "will not") + " hold after performing the action.";
      r.provenance = std::string(r.gold_yes ? "positive" : "negative") + ": fact in " + std::string(cell_id(c));
      r.check = json{{"action", task.action_name(a)}, {"facts", {task.atom_name(f)}}};
      out.push_back(std::move(r));
    }
    return out;
  }

  std::vector<AtomId> truths = cells[Cell::kept], falses = cells[Cell::deleted];
  truths.insert(truths.end(), cells[Cell::added].begin(), cells[Cell::added].end());
  falses.insert(falses.end(), cells[Cell::untouched].begin(), cells[Cell::untouched].end());

  std::vector<std::vector<AtomId>> opts;
  if (!ctx.options().prog_pairs) {
    if (truths.empty() || falses.size() < 3) return out;
    const auto& gold_cell = cells[Cell::added].empty() ? cells[Cell::kept] : cells[Cell::added];
    opts.push_back({rng.pick(gold_cell)});
    std::vector<AtomId> wrong;
    if (!cells[Cell::deleted].empty()) wrong.push_back(rng.pick(cells[Cell::deleted]));
    std::vector<AtomId> rest;
    for (auto f : falses)
      if (std::find(wrong.begin(), wrong.end(), f) == wrong.end()) rest.push_back(f);
    for (auto f : pick_distinct(rng, rest, 3 - wrong.size())) wrong.push_back(f);
    for (auto f : wrong) opts.push_back({f});
  } else {
    if (truths.size() < 2 || falses.empty()) return out;
    std::vector<AtomId> gold;
    if (!cells[Cell::added].empty() && !cells[Cell::kept].empty())
      gold = {rng.pick(cells[Cell::added]), rng.pick(cells[Cell::kept])};
    else
      gold = pick_distinct(rng, truths, 2);
    opts.push_back(gold);
    std::set<std::set<AtomId>> seen{{gold.begin(), gold.end()}};
    for (int attempt = 0; attempt < 200 && opts.size() < 4; ++attempt) {
      const AtomId bad = rng.pick(falses);
      const auto& partner_pool = rng.coin() ? truths : falses;
      const AtomId other = rng.pick(partner_pool);
      if (other == bad) continue;
      std::vector<AtomId> pair = rng.coin() ? std::vector<AtomId>{other, bad} : std::vector<AtomId>{bad, other};
      if (seen.insert({pair.begin(), pair.end()}).second) opts.push_back(pair);
    }
    if (opts.size() < 4) return {};
  }

  auto r = base_record(ctx, s, Task::prog, q, seed);
  r.question = phrasing::prog_mcq(action);
  r.check = json{{"action", task.action_name(a)}, {"options", json::array()}};
  for (const auto& o : opts) {
    std::vector<std::string> parts, reasons;
    bool all_true = true;
    for (auto f : o) {
      parts.push_back(rd.render_fact(f));
      reasons.push_back(rd.render_fact(f) + " " + cell_reason(cell_of[f]));
      all_true = all_true && cell_true(cell_of[f]);
    }
    r.options.push_back(phrasing::conjunction(parts));
    r.option_notes.push_back(phrasing::conjunction(reasons) + (all_true ? ", so this holds." : ", so this does not hold."));
    r.check["options"].push_back(json{{"facts", atom_names(task, o)}});
  }
  r.gold_index = 0;
  r.rationale_head = effects;
  r.provenance = "gold: facts true after the action; distractors: facts false after the action";
  out.push_back(std::move(r));
  return out;
}

// ---------------------------------------------------------------- reachability

namespace {

struct ReachItem {
  std::vector<AtomId> facts;
  std::string source;             // rollout | mutex | static | relaxed
  std::vector<ActionId> witness;  // rollout certificate
  AtomId culprit = 0;             // unreachable fact for static/relaxed
};

std::string reach_reason(const ProblemContext& ctx, const ReachItem& it) {
  const auto& rd = ctx.renderer();
  std::vector<std::string> texts;
  for (auto f : it.facts) texts.push_back(rd.render_fact(f));
  if (it.source == "rollout") {
    if (it.witness.empty()) return phrasing::conjunction(texts) + " already hold(s) in the current state.";
    std::vector<std::string> seq;
    for (auto a : it.witness) seq.push_back(rd.render_action(a));
    return "Applying the actions \"" + phrasing::sequence_text(seq) + "\" from the current state reaches a state where " +
           phrasing::conjunction(texts) + " hold(s).";
  }
  if (it.source == "mutex")
    return "The facts " + texts[0] + " and " + texts[1] + " are mutually exclusive: they never hold together in a reachable state.";
  if (it.source == "static")
    return "The fact " + rd.render_fact(it.culprit) + " does not hold now and no action can change it.";
  return "Even when the delete effects of all actions are ignored, the fact " + rd.render_fact(it.culprit) +
         " cannot be achieved from the current state.";
}

json reach_check(const GroundTask& task, const ReachItem& it) {
  json c{{"facts", atom_names(task, it.facts)}, {"source", it.source}};
  if (it.source == "rollout") {
    json w = json::array();
    for (auto a : it.witness) w.push_back(task.action_name(a));
    c["witness"] = w;
  }
  return c;
}

/// Rollouts from s, each returned as its action list.
std::vector<std::vector<ActionId>> rollouts(const GroundTask& task, const State& s, std::size_t count,
                                            std::size_t depth, Rng& rng) {
  std::vector<std::vector<ActionId>> out;
  for (std::size_t i = 0; i < count; ++i) {
    std::vector<ActionId> acts;
    State cur = s;
    const std::size_t len = 1 + rng.below(std::max<std::size_t>(depth, 1));
    for (std::size_t k = 0; k < len; ++k) {
      auto app = applicable_actions(task, cur);
      if (app.empty()) break;
      const ActionId a = rng.pick(app);
      acts.push_back(a);
      cur = progress(task, cur, a);
    }
    out.push_back(std::move(acts));
  }
  return out;
}

}  // namespace

std::vector<QuestionRecord> gen_reachability(const ProblemContext& ctx, const State& s, std::uint64_t seed, QType q) {
  const auto& task = ctx.task();
  const auto& rd = ctx.renderer();
  Rng rng(seed);
  const auto rr = ctx.explorer().explore(s);

  // Positives: facts of rollout end states, preferring ones not true now.
  std::vector<ReachItem> positives;
  for (auto& acts : rollouts(task, s, ctx.options().rollouts, ctx.options().rollout_depth, rng)) {
    const State end = state_trace(task, s, acts).back();
    std::vector<AtomId> fresh, any;
    for (auto p : ctx.live_atoms())
      if (end.contains(p)) {
        any.push_back(p);
        if (!s.contains(p)) fresh.push_back(p);
      }
    const auto& pool = fresh.empty() ? any : fresh;
    if (pool.empty()) continue;
    ReachItem it{{rng.pick(pool)}, "rollout", acts, 0};
    if (rng.coin() && any.size() > 1) {
      AtomId other = rng.pick(any);
      if (other != it.facts[0]) it.facts.push_back(other);
    }
    positives.push_back(std::move(it));
  }

  // Negatives by certificate kind.
  std::vector<AtomId> statics = task.static_false.to_vector();
  std::vector<AtomId> relaxed;
  for (auto p : ctx.live_atoms())
    if (!rr.reachable_atoms.contains(p)) relaxed.push_back(p);
  const auto& mutex_pairs = ctx.mutexes().pairs();
  std::vector<std::string> sources;
  if (!statics.empty()) sources.push_back("static");
  if (!relaxed.empty()) sources.push_back("relaxed");
  if (!mutex_pairs.empty()) sources.push_back("mutex");

  auto negative = [&]() -> std::optional<ReachItem> {
    if (sources.empty()) return std::nullopt;
    const auto& src = rng.pick(sources);
    if (src == "mutex") {
      const auto& [p, qq] = rng.pick(mutex_pairs);
      return ReachItem{{p, qq}, src, {}, 0};
    }
    const AtomId bad = rng.pick(src == "static" ? statics : relaxed);
    ReachItem it{{bad}, src, {}, bad};
    if (rng.coin() && !ctx.live_atoms().empty()) {
      const AtomId other = rng.pick(ctx.live_atoms());
      if (other != bad) it.facts = rng.coin() ? std::vector<AtomId>{bad, other} : std::vector<AtomId>{other, bad};
    }
    return it;
  };
  auto text_of = [&](const ReachItem& it) {
    std::vector<std::string> texts;
    for (auto f : it.facts) texts.push_back(rd.render_fact(f));
    return phrasing::conjunction(texts);
  };

  std::vector<QuestionRecord> out;
  if (q == QType::boolean) {
    std::vector<ReachItem> items;
    if (!positives.empty()) items.push_back(rng.pick(positives));
    if (auto n = negative()) items.push_back(*n);
    for (const auto& it : items) {
      auto r = base_record(ctx, s, Task::reach, q, seed);
      r.question = phrasing::reach_bool(text_of(it));
      r.gold_yes = it.source == "rollout";
      r.rationale = "Step 1: " + reach_reason(ctx, it) + "\nSo, " + (r.gold_yes ? "it is possible." : "it is not possible.");
      r.provenance = std::string(r.gold_yes ? "positive: rollout end state" : "negative: ") +
                     (r.gold_yes ? "" : (it.source == "mutex" ? "mutex pair" : it.source == "static" ? "static fact" : "relaxed-unreachable fact"));
      r.check = reach_check(task, it);
      out.push_back(std::move(r));
    }
    return out;
  }

  if (positives.empty() || sources.empty()) return out;
  std::vector<ReachItem> opts{rng.pick(positives)};
  std::set<std::string> texts{text_of(opts[0])};
  for (int attempt = 0; attempt < 100 && opts.size() < 4; ++attempt) {
    auto n = negative();
    if (n && texts.insert(text_of(*n)).second) opts.push_back(*n);
  }
  if (opts.size() < 4) return out;
  auto r = base_record(ctx, s, Task::reach, q, seed);
  r.question = phrasing::reach_mcq();
  r.check = json{{"options", json::array()}};
  std::string prov = "gold: rollout end state; distractors:";
  for (std::size_t i = 0; i < opts.size(); ++i) {
    r.options.push_back(text_of(opts[i]));
    r.option_notes.push_back(reach_reason(ctx, opts[i]) + (i == 0 ? " So, this can hold." : " So, this cannot hold."));
    r.check["options"].push_back(reach_check(task, opts[i]));
    if (i > 0) prov += (i > 1 ? ", " : " ") + opts[i].source;
  }
  r.gold_index = 0;
  r.rationale_head = "Step 1: Consider each option in turn.";
  r.provenance = prov;
  out.push_back(std::move(r));
  return out;
}

// ---------------------------------------------------------------- action reachability

namespace {

struct AReachItem {
  ActionId action = 0;
  bool corrupt = false;
  std::size_t variant = 0;
  std::string source;              // rollout | relaxed | mutex | corrupt
  std::vector<ActionId> witness;   // actions before it becomes applicable
  std::vector<AtomId> culprits;    // unreachable precondition(s)
};

std::string areach_text(const Renderer& rd, const AReachItem& it) {
  return render_ref(rd, it.action, it.corrupt, it.variant);
}

std::string areach_reason(const ProblemContext& ctx, const AReachItem& it) {
  const auto& rd = ctx.renderer();
  const std::string name = areach_text(rd, it);
  if (it.source == "corrupt") return "The action \"" + name + "\" is not a valid action in this domain, so it can never be applied.";
  if (it.source == "rollout") {
    if (it.witness.empty()) return "The action \"" + name + "\" is applicable in the current state.";
    std::vector<std::string> seq;
    for (auto a : it.witness) seq.push_back(rd.render_action(a));
    return "After applying the actions \"" + phrasing::sequence_text(seq) + "\", the action \"" + name + "\" is applicable.";
  }
  if (it.source == "mutex")
    return "The action \"" + name + "\" requires both " + rd.render_fact(it.culprits[0]) + " and " +
           rd.render_fact(it.culprits[1]) + ", which can never hold together.";
  return "The action \"" + name + "\" requires " + rd.render_fact(it.culprits[0]) +
         ", which cannot be achieved from the current state even when delete effects are ignored.";
}

json areach_check(const GroundTask& task, const AReachItem& it) {
  json c = action_ref(task, it.action, it.corrupt, it.variant);
  c["source"] = it.source;
  if (it.source == "rollout") {
    json w = json::array();
    for (auto a : it.witness) w.push_back(task.action_name(a));
    c["witness"] = w;
  }
  return c;
}

}  // namespace

std::vector<QuestionRecord> gen_action_reachability(const ProblemContext& ctx, const State& s, std::uint64_t seed,
                                                    QType q) {
  const auto& task = ctx.task();
  const auto& rd = ctx.renderer();
  Rng rng(seed);
  if (task.actions.empty()) return {};
  const auto rr = ctx.explorer().explore(s);

  std::vector<AReachItem> positives;
  for (auto a : applicable_actions(task, s)) positives.push_back({a, false, 0, "rollout", {}, {}});
  for (auto& acts : rollouts(task, s, ctx.options().rollouts, ctx.options().rollout_depth, rng))
    for (std::size_t k = 1; k < acts.size(); ++k)
      positives.push_back({acts[k], false, 0, "rollout", {acts.begin(), acts.begin() + static_cast<std::ptrdiff_t>(k)}, {}});

  std::vector<AReachItem> relaxed, mutex;
  for (const auto& a : task.actions) {
    std::optional<AtomId> bad;
    for (auto p : a.pre)
      if (!rr.reachable_atoms.contains(p) && !task.static_false.contains(p)) bad = p;
    if (bad) {
      relaxed.push_back({a.id, false, 0, "relaxed", {}, {*bad}});
      continue;
    }
    for (std::size_t i = 0; i < a.pre.size(); ++i)
      for (std::size_t j = i + 1; j < a.pre.size(); ++j)
        if (ctx.mutexes().is_mutex(a.pre[i], a.pre[j])) {
          mutex.push_back({a.id, false, 0, "mutex", {}, {a.pre[i], a.pre[j]}});
          i = j = a.pre.size();
        }
  }
  std::vector<std::string> sources{"corrupt"};
  if (!relaxed.empty()) sources.push_back("relaxed");
  if (!mutex.empty()) sources.push_back("mutex");
  auto negative = [&]() -> AReachItem {
    const auto& src = rng.pick(sources);
    if (src == "relaxed") return rng.pick(relaxed);
    if (src == "mutex") return rng.pick(mutex);
    const ActionId a = static_cast<ActionId>(rng.below(task.num_actions()));
    return {a, true, rng.below(rd.num_corrupt_variants(a)), "corrupt", {}, {}};
  };

  std::vector<QuestionRecord> out;
  if (q == QType::boolean) {
    std::vector<AReachItem> items;
    if (!positives.empty()) items.push_back(rng.pick(positives));
    items.push_back(negative());
    for (const auto& it : items) {
      auto r = base_record(ctx, s, Task::areach, q, seed);
      r.question = phrasing::areach_bool(areach_text(rd, it));
      r.gold_yes = it.source == "rollout";
      r.rationale = "Step 1: " + areach_reason(ctx, it) + "\nSo, " + (r.gold_yes ? "it is possible." : "it is not possible.");
      r.provenance = r.gold_yes ? "positive: action on a rollout" : "negative: " + it.source;
      r.check = areach_check(task, it);
      out.push_back(std::move(r));
    }
    return out;
  }
  if (positives.empty()) return out;
  std::vector<AReachItem> opts{rng.pick(positives)};
  std::set<std::string> texts{areach_text(rd, opts[0])};
  for (int attempt = 0; attempt < 100 && opts.size() < 4; ++attempt) {
    auto n = negative();
    if (texts.insert(areach_text(rd, n)).second) opts.push_back(n);
  }
  if (opts.size() < 4) return out;
  auto r = base_record(ctx, s, Task::areach, q, seed);
  r.question = phrasing::areach_mcq();
  r.check = json{{"options", json::array()}};
  std::string prov = "gold: action on a rollout; distractors:";
  for (std::size_t i = 0; i < opts.size(); ++i) {
    r.options.push_back(areach_text(rd, opts[i]));
    r.option_notes.push_back(areach_reason(ctx, opts[i]));
    r.check["options"].push_back(areach_check(task, opts[i]));
    if (i > 0) prov += (i > 1 ? ", " : " ") + opts[i].source;
  }
  r.gold_index = 0;
  r.rationale_head = "Step 1: Consider each option in turn.";
  r.provenance = prov;
  out.push_back(std::move(r));
  return out;
}

// ---------------------------------------------------------------- validation

namespace {

struct SeqItem {
  std::vector<json> refs;
  std::vector<std::string> texts;
};

SeqItem make_seq(const ProblemContext& ctx, const std::vector<ActionId>& acts) {
  SeqItem it;
  for (auto a : acts) {
    it.refs.push_back(action_ref(ctx.task(), a));
    it.texts.push_back(ctx.renderer().render_action(a));
  }
  return it;
}

int val_case(const SequenceVerdict& v) {
  if (!v.valid) return 0;
  if (!v.applicable) return 1;
  if (!v.goal_reaching) return 2;
  return 3;
}

}  // namespace

std::vector<QuestionRecord> gen_validation(const ProblemContext& ctx, const State& s, const std::vector<Plan>& plans,
                                           std::uint64_t seed, QType q) {
  const auto& task = ctx.task();
  const auto& rd = ctx.renderer();
  Rng rng(seed);
  if (plans.empty()) return {};
  const Plan& plan = rng.pick(plans);
  const auto& acts = plan.actions;
  const std::size_t n = acts.size();
  std::array<std::optional<SeqItem>, 4> cases;

  cases[3] = make_seq(ctx, acts);

  for (int attempt = 0; attempt < 20; ++attempt) {
    const std::size_t k = rng.below(n + 1);
    std::vector<ActionId> seq(acts.begin(), acts.begin() + static_cast<std::ptrdiff_t>(k));
    State cur = plan.trace[k];
    const std::size_t len = 1 + rng.below(std::max<std::size_t>(n, 3));
    for (std::size_t i = 0; i < len; ++i) {
      auto app = applicable_actions(task, cur);
      if (app.empty()) break;
      const ActionId a = rng.pick(app);
      seq.push_back(a);
      cur = progress(task, cur, a);
    }
    if (!seq.empty() && !is_goal(task, cur)) {
      cases[2] = make_seq(ctx, seq);
      break;
    }
  }

  for (std::size_t i = n == 0 ? 0 : n - 1;; --i) {
    std::vector<ActionId> bad;
    for (const auto& a : task.actions)
      if (!is_applicable(task, plan.trace[i], a.id)) bad.push_back(a.id);
    if (!bad.empty()) {
      std::vector<ActionId> seq(acts.begin(), acts.begin() + static_cast<std::ptrdiff_t>(i));
      seq.push_back(rng.pick(bad));
      cases[1] = make_seq(ctx, seq);
      break;
    }
    if (i == 0) break;
  }

  if (!task.actions.empty()) {
    SeqItem it = n > 0 ? make_seq(ctx, acts) : make_seq(ctx, {static_cast<ActionId>(rng.below(task.num_actions()))});
    const std::size_t idx = rng.below(it.texts.size());
    const ActionId victim = *task.find_action(it.refs[idx]["action"].get<std::string>());
    const std::size_t v = rng.below(rd.num_corrupt_variants(victim));
    it.refs[idx] = action_ref(task, victim, true, v);
    it.texts[idx] = rd.render_corrupt_action(victim, v);
    cases[0] = std::move(it);
  }

  auto checked = [&](const SeqItem& it) {
    json seq = json::array();
    for (const auto& r : it.refs) seq.push_back(r);
    return seq;
  };
  static const char* kCaseNames[] = {"(a) not valid", "(b) valid, not applicable", "(c) applicable, not a plan",
                                     "(d) plan"};
  std::vector<QuestionRecord> out;
  if (q == QType::mcq) {
    for (int c = 0; c < 4; ++c) {
      if (!cases[c]) continue;
      auto acc = describe_sequence(ctx, s, cases[c]->texts);
      if (val_case(acc.verdict) != c) throw ContractViolation("validation construction produced the wrong case");
      auto r = base_record(ctx, s, Task::val, q, seed);
      r.question = phrasing::val_mcq(cases[c]->texts);
      const auto& fixed = phrasing::val_options();
      r.options.assign(fixed.begin(), fixed.end());
      r.gold_index = c;
      r.rationale_head = acc.steps;
      r.check = json{{"sequence", checked(*cases[c])}};
      r.provenance = std::string("case ") + kCaseNames[c];
      out.push_back(std::move(r));
    }
    return out;
  }
  using phrasing::ValClaim;
  const std::array<std::tuple<ValClaim, int, bool>, 6> variants{{{ValClaim::valid, 1, true},
                                                                 {ValClaim::valid, 0, false},
                                                                 {ValClaim::applicable, 2, true},
                                                                 {ValClaim::applicable, 1, false},
                                                                 {ValClaim::plan, 3, true},
                                                                 {ValClaim::plan, 2, false}}};
  for (const auto& [claim, c, yes] : variants) {
    if (!cases[c]) continue;
    auto acc = describe_sequence(ctx, s, cases[c]->texts);
    const bool holds = claim == ValClaim::valid        ? acc.verdict.valid
                       : claim == ValClaim::applicable ? acc.verdict.applicable
                                                       : acc.verdict.goal_reaching;
    if (holds != yes) throw ContractViolation("validation construction produced the wrong verdict");
    const char* what = claim == ValClaim::valid ? "valid" : claim == ValClaim::applicable ? "applicable" : "a plan";
    auto r = base_record(ctx, s, Task::val, q, seed);
    r.question = phrasing::val_bool(claim, cases[c]->texts);
    r.gold_yes = yes;
    r.rationale = acc.steps + "\nSo, the sequence " + (yes ? "is " : "is not ") + what + ".";
    r.check = json{{"claim", what}, {"sequence", checked(*cases[c])}};
    r.provenance = std::string(yes ? "positive" : "negative") + ": case " + kCaseNames[c];
    out.push_back(std::move(r));
  }
  return out;
}

// ---------------------------------------------------------------- justification

namespace {

struct Removable {
  std::size_t index, count;
  bool removable;
};

std::vector<std::string> plan_texts(const Renderer& rd, const std::vector<ActionId>& plan) {
  std::vector<std::string> out;
  for (auto a : plan) out.push_back(rd.render_action(a));
  return out;
}

/// Positions whose single action (count 1) or consecutive pair (count 2)
/// occurs exactly once in the plan, so naming it is unambiguous.
std::vector<Removable> candidates(const GroundTask& task, const State& s, const std::vector<ActionId>& plan,
                                  std::size_t count) {
  std::vector<Removable> out;
  if (plan.size() < count) return out;
  for (std::size_t i = 0; i + count <= plan.size(); ++i) {
    std::size_t occurrences = 0;
    for (std::size_t j = 0; j + count <= plan.size(); ++j)
      if (std::equal(plan.begin() + static_cast<std::ptrdiff_t>(i), plan.begin() + static_cast<std::ptrdiff_t>(i + count),
                     plan.begin() + static_cast<std::ptrdiff_t>(j)))
        ++occurrences;
    if (occurrences != 1) continue;
    out.push_back({i, count, justification_check(task, s, plan, {i, count})});
  }
  return out;
}

std::string removal_reason(const ProblemContext& ctx, const State& s, const std::vector<ActionId>& plan,
                           std::size_t index, std::size_t count, int first_step) {
  const auto& rd = ctx.renderer();
  std::vector<ActionId> reduced(plan.begin(), plan.begin() + static_cast<std::ptrdiff_t>(index));
  reduced.insert(reduced.end(), plan.begin() + static_cast<std::ptrdiff_t>(index + count), plan.end());
  const auto texts = plan_texts(rd, reduced);
  auto acc = describe_sequence(ctx, s, texts, first_step + 1);
  return "Step " + std::to_string(first_step) + ": Removing " +
         phrasing::conjunction(plan_texts(rd, {plan.begin() + static_cast<std::ptrdiff_t>(index),
                                               plan.begin() + static_cast<std::ptrdiff_t>(index + count)})) +
         " gives the sequence \"" + phrasing::sequence_text(texts) + "\".\n" + acc.steps;
}

json removal_check(const GroundTask& task, const std::vector<ActionId>& plan, std::optional<std::size_t> index,
                   const std::vector<ActionId>& actions) {
  json names = json::array();
  for (auto a : actions) names.push_back(task.action_name(a));
  json c{{"actions", names}};
  c["index"] = index ? json(*index) : json(nullptr);
  (void)plan;
  return c;
}

}  // namespace

std::vector<QuestionRecord> gen_justification(const ProblemContext& ctx, const State& s, const std::vector<Plan>& plans,
                                              std::uint64_t seed, QType q) {
  const auto& task = ctx.task();
  const auto& rd = ctx.renderer();
  Rng rng(seed);
  std::size_t count = rng.coin() ? 2 : 1;

  struct Option {
    std::vector<ActionId> plan;
    std::vector<Removable> yes, no;
  };
  std::vector<Option> usable[3];
  std::vector<std::size_t> order(plans.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  rng.shuffle(order);
  for (auto i : order) {
    auto plan = truncate_after_goal(task, s, plans[i].actions);
    for (std::size_t c : {std::size_t{1}, std::size_t{2}}) {
      Option o{plan, {}, {}};
      for (const auto& r : candidates(task, s, plan, c)) (r.removable ? o.yes : o.no).push_back(r);
      if (!o.yes.empty() || !o.no.empty()) usable[c].push_back(std::move(o));
    }
  }
  auto has_yes = [&](std::size_t c) {
    return std::any_of(usable[c].begin(), usable[c].end(), [](const Option& o) { return !o.yes.empty(); });
  };
  if (!has_yes(count) && has_yes(3 - count)) count = 3 - count;
  if (!has_yes(count)) return {};
  const Option* chosen = nullptr;
  for (const auto& o : usable[count])
    if (!o.yes.empty() && (q == QType::boolean || !o.no.empty() || chosen == nullptr)) {
      chosen = &o;
      if (!o.no.empty()) break;
    }
  const auto& plan = chosen->plan;
  const auto texts = plan_texts(rd, plan);
  auto slice = [&](std::size_t i, std::size_t c) {
    return std::vector<ActionId>(plan.begin() + static_cast<std::ptrdiff_t>(i), plan.begin() + static_cast<std::ptrdiff_t>(i + c));
  };
  json plan_names = json::array();
  for (auto a : plan) plan_names.push_back(task.action_name(a));

  std::vector<QuestionRecord> out;
  if (q == QType::boolean) {
    std::vector<Removable> picks{rng.pick(chosen->yes)};
    if (!chosen->no.empty()) picks.push_back(rng.pick(chosen->no));
    for (const auto& p : picks) {
      auto r = base_record(ctx, s, Task::just, q, seed);
      const auto removed = slice(p.index, p.count);
      r.question = phrasing::just_bool(texts, plan_texts(rd, removed));
      r.gold_yes = p.removable;
      r.rationale = removal_reason(ctx, s, plan, p.index, p.count, 1) + "\nSo, " +
                    (p.count == 1 ? "the action " : "the pair of actions ") + (p.removable ? "can" : "cannot") +
                    " be removed.";
      r.check = json{{"plan", plan_names}, {"removal", removal_check(task, plan, p.index, removed)}};
      r.provenance = std::string(p.removable ? "positive: removable " : "negative: not removable ") +
                     (p.count == 1 ? "action" : "pair");
      out.push_back(std::move(r));
    }
    return out;
  }

  struct McqOpt {
    std::optional<std::size_t> index;
    std::vector<ActionId> actions;
  };
  std::vector<McqOpt> opts;
  const auto gold = rng.pick(chosen->yes);
  opts.push_back({gold.index, slice(gold.index, gold.count)});
  std::set<std::vector<ActionId>> seen{opts[0].actions};
  auto no = chosen->no;
  rng.shuffle(no);
  for (const auto& p : no) {
    if (opts.size() == 4) break;
    if (seen.insert(slice(p.index, p.count)).second) opts.push_back({p.index, slice(p.index, p.count)});
  }
  // Fill with actions or pairs that do not occur consecutively in the plan.
  auto occurs = [&](const std::vector<ActionId>& xs) {
    return std::search(plan.begin(), plan.end(), xs.begin(), xs.end()) != plan.end();
  };
  for (int attempt = 0; attempt < 200 && opts.size() < 4; ++attempt) {
    std::vector<ActionId> xs;
    if (count == 1) {
      xs = {static_cast<ActionId>(rng.below(task.num_actions()))};
    } else if (plan.size() >= 2) {
      xs = {plan[rng.below(plan.size())], plan[rng.below(plan.size())]};
    } else {
      break;
    }
    if (occurs(xs) || !seen.insert(xs).second) continue;
    std::set<std::string> names;
    for (const auto& o : opts) names.insert(phrasing::conjunction(plan_texts(rd, o.actions)));
    if (names.contains(phrasing::conjunction(plan_texts(rd, xs)))) continue;
    opts.push_back({std::nullopt, xs});
  }
  if (opts.size() < 4) return out;

  auto r = base_record(ctx, s, Task::just, q, seed);
  r.question = phrasing::just_mcq(texts, count == 2);
  r.check = json{{"plan", plan_names}, {"options", json::array()}};
  for (const auto& o : opts) {
    const std::string label = phrasing::conjunction(plan_texts(rd, o.actions));
    r.options.push_back(label);
    r.check["options"].push_back(removal_check(task, plan, o.index, o.actions));
    if (!o.index) {
      r.option_notes.push_back(label + (count == 1 ? " does not occur in the plan." : " are not consecutive actions of the plan."));
      continue;
    }
    const bool ok = justification_check(task, s, plan, {*o.index, count});
    std::vector<ActionId> reduced(plan.begin(), plan.begin() + static_cast<std::ptrdiff_t>(*o.index));
    reduced.insert(reduced.end(), plan.begin() + static_cast<std::ptrdiff_t>(*o.index + count), plan.end());
    r.option_notes.push_back("Without " + label + ", the sequence \"" + phrasing::sequence_text(plan_texts(rd, reduced)) +
                             "\" " + (ok ? "is still a plan." : "is not a plan."));
  }
  r.gold_index = 0;
  r.rationale_head = "Step 1: Remove each option from the plan and check whether the rest is still a plan.";
  r.provenance = std::string("gold: removable ") + (count == 1 ? "action" : "pair") + "; distractors: not removable or not in the plan";
  out.push_back(std::move(r));
  return out;
}

// ---------------------------------------------------------------- landmarks

std::vector<QuestionRecord> gen_landmarks(const ProblemContext& ctx, const State& s, const std::vector<Plan>& plans,
                                          std::uint64_t seed, QType q) {
  const auto& task = ctx.task();
  const auto& rd = ctx.renderer();
  Rng rng(seed);
  if (plans.empty()) return {};
  const auto lm = landmarks_rhw(task, s);
  if (lm.goal_unreachable) return {};
  const auto rr = ctx.explorer().explore(s);
  const auto positives = lm.landmarks.to_vector();
  std::vector<std::pair<AtomId, std::size_t>> negatives;
  for (const auto& [p, witness] : landmark_negatives(task, s, plans))
    if (task.dynamic.contains(p) && rr.reachable_atoms.contains(p) && !s.contains(p)) negatives.emplace_back(p, witness);

  auto plan_names = [&](std::size_t i) {
    json names = json::array();
    for (auto a : plans[i].actions) names.push_back(task.action_name(a));
    return names;
  };
  auto chain = [&](AtomId p) {
    std::vector<AtomId> c{p};
    while (lm.parent.at(c.back()) != c.back()) c.push_back(lm.parent.at(c.back()));
    return c;
  };
  auto positive_reason = [&](AtomId p) {
    const auto c = chain(p);
    std::string text = "Step 1: The fact " + rd.render_fact(c.back()) +
                       " is a goal fact that does not hold in the current state, so it must hold at some point along any plan.";
    for (std::size_t i = c.size() - 1; i > 0; --i)
      text += "\nStep " + std::to_string(c.size() - i + 1) + ": Every action that can first achieve " + rd.render_fact(c[i]) +
              " requires " + rd.render_fact(c[i - 1]) + ", so " + rd.render_fact(c[i - 1]) +
              " must also hold at some point along any plan.";
    return text;
  };
  auto negative_reason = [&](AtomId p, std::size_t w) {
    return "The plan \"" + phrasing::sequence_text(plan_texts(rd, plans[w].actions)) +
           "\" reaches the goal from the current state and the fact " + rd.render_fact(p) + " never holds along it.";
  };
  auto positive_check = [&](AtomId p) {
    json c{{"fact", task.atom_name(p)}, {"landmark", true}};
    json names = json::array();
    for (auto x : chain(p)) names.push_back(task.atom_name(x));
    c["chain"] = names;
    return c;
  };
  auto negative_check = [&](AtomId p, std::size_t w) {
    return json{{"fact", task.atom_name(p)}, {"landmark", false}, {"witness", plan_names(w)}};
  };

  std::vector<QuestionRecord> out;
  if (q == QType::boolean) {
    if (!positives.empty()) {
      const AtomId p = rng.pick(positives);
      auto r = base_record(ctx, s, Task::land, q, seed);
      r.question = phrasing::land_bool(rd.render_fact(p));
      r.gold_yes = true;
      r.rationale = positive_reason(p) + "\nSo, the fact is a landmark.";
      r.check = positive_check(p);
      r.provenance = "positive: landmark by backchaining from the goal";
      out.push_back(std::move(r));
    }
    if (!negatives.empty()) {
      const auto [p, w] = rng.pick(negatives);
      auto r = base_record(ctx, s, Task::land, q, seed);
      r.question = phrasing::land_bool(rd.render_fact(p));
      r.gold_yes = false;
      r.rationale = "Step 1: " + negative_reason(p, w) + "\nSo, the fact is not a landmark.";
      r.check = negative_check(p, w);
      r.provenance = "negative: absent from a witness plan";
      out.push_back(std::move(r));
    }
    return out;
  }
  if (positives.empty() || negatives.size() < 3) return out;
  const AtomId gold = rng.pick(positives);
  auto r = base_record(ctx, s, Task::land, q, seed);
  r.question = phrasing::land_mcq();
  r.check = json{{"options", json::array()}};
  r.options.push_back(rd.render_fact(gold));
  r.option_notes.push_back(rd.render_fact(gold) + " is a landmark: " +
                           (chain(gold).size() == 1 ? "it is a goal fact that does not hold now."
                                                    : "every way of reaching the goal passes through it."));
  r.check["options"].push_back(positive_check(gold));
  for (const auto& [p, w] : pick_distinct(rng, negatives, 3)) {
    r.options.push_back(rd.render_fact(p));
    r.option_notes.push_back(negative_reason(p, w));
    r.check["options"].push_back(negative_check(p, w));
  }
  r.gold_index = 0;
  r.rationale_head = positive_reason(gold);
  r.provenance = "gold: landmark by backchaining from the goal; distractors: absent from witness plans";
  out.push_back(std::move(r));
  return out;
}

std::vector<QuestionRecord> generate_for_state(Task t, const ProblemContext& ctx, const State& s, std::uint64_t seed,
                                               QType q) {
  switch (t) {
    case Task::app: return gen_applicability(ctx, s, seed, q);
    case Task::prog: return gen_progression(ctx, s, seed, q);
    case Task::reach: return gen_reachability(ctx, s, seed, q);
    case Task::areach: return gen_action_reachability(ctx, s, seed, q);
    default: break;
  }
  const auto found = ctx.plans_from(s, child_seed(seed, {0x91a45}));
  if (found.plans.empty()) return {};
  switch (t) {
    case Task::val: return gen_validation(ctx, s, found.plans, seed, q);
    case Task::just: return gen_justification(ctx, s, found.plans, seed, q);
    default: return gen_landmarks(ctx, s, found.plans, seed, q);
  }
}

}  // namespace planq
