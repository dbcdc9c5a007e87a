#include "planq/audit.hpp"

#include <algorithm>
#include <stdexcept>

namespace planq {

using nlohmann::json;

namespace {

struct Unverifiable {
  std::string why;
};

struct Mismatch {
  std::string why;
};

bool tri(Tri t, const char* what) {
  if (t == Tri::unknown) throw Unverifiable{std::string(what) + " is beyond the explored state space"};
  return t == Tri::yes;
}

class Checker {
 public:
  Checker(const QuestionRecord& r, const GroundTask& task, const Renderer& rd, const OracleIndex& oracle)
      : r_(r), task_(task), rd_(rd), oracle_(oracle) {}

  VerifyOutcome run() {
    try {
      locate();
      expect(rd_.render_context(state_, task_needs_goal(r_.task)) == r_.context, "context does not re-render");
      if (r_.qtype == QType::boolean) {
        const bool truth = answer(r_.check);
        expect(truth == r_.gold_yes, std::string("oracle answers ") + (truth ? "yes" : "no"));
      } else {
        expect(r_.options.size() == 4, "mcq record needs four options");
        if (r_.task != Task::val)
          expect(r_.check.contains("options") && r_.check["options"].size() == 4, "check payload lacks four options");
        int correct = -1;
        for (int i = 0; i < 4; ++i) {
          if (!option(i)) continue;
          expect(correct < 0, "more than one option is correct");
          correct = i;
        }
        expect(correct >= 0, "no option is correct");
        expect(correct == r_.gold_index, std::string("oracle picks option ") + option_letter(correct));
      }
      return {VerifyStatus::confirmed, ""};
    } catch (const Mismatch& m) {
      return {VerifyStatus::mismatch, m.why};
    } catch (const Unverifiable& u) {
      return {VerifyStatus::unverifiable, u.why};
    } catch (const std::exception& e) {
      return {VerifyStatus::mismatch, std::string("malformed check payload: ") + e.what()};
    }
  }

 private:
  static void expect(bool ok, const std::string& why) {
    if (!ok) throw Mismatch{why};
  }

  void locate() {
    std::vector<AtomId> atoms;
    for (const auto& name : r_.state) {
      auto a = task_.find_atom(name);
      expect(a.has_value(), "unknown atom " + name);
      atoms.push_back(*a);
    }
    state_ = task_.make_state(atoms);
    auto n = oracle_.find(state_);
    if (!n) {
      if (oracle_.truncated()) throw Unverifiable{"state not in the truncated index"};
      throw Mismatch{"state is not reachable from the initial state"};
    }
    node_ = *n;
  }

  AtomId atom(const json& name) const {
    auto a = task_.find_atom(name.get<std::string>());
    expect(a.has_value(), "unknown atom " + name.dump());
    return *a;
  }

  ActionId action(const json& name) const {
    auto a = task_.find_action(name.get<std::string>());
    expect(a.has_value(), "unknown action " + name.dump());
    return *a;
  }

  std::vector<AtomId> atoms(const json& names) const {
    std::vector<AtomId> out;
    for (const auto& n : names) out.push_back(atom(n));
    return out;
  }

  std::string facts_text(const std::vector<AtomId>& fs) const {
    std::vector<std::string> parts;
    for (auto f : fs) parts.push_back(rd_.render_fact(f));
    return phrasing::conjunction(parts);
  }

  std::string ref_text(const json& ref) const {
    const ActionId a = action(ref["action"]);
    const std::size_t v = ref.value("variant", std::size_t{0});
    return ref.value("corrupt", false) ? rd_.render_corrupt_action(a, v) : rd_.render_action(a, v);
  }

  std::optional<OracleIndex::Node> edge(OracleIndex::Node from, ActionId a) const {
    for (const auto& [b, to] : oracle_.successors(from))
      if (b == a) return to;
    return std::nullopt;
  }

  /// Follows named texts through the explicit graph: (valid, applicable, plan).
  std::array<bool, 3> walk(const std::vector<std::string>& texts) const {
    std::vector<ActionId> ids;
    for (const auto& t : texts) {
      auto a = rd_.parse_action_name(t);
      if (!a) return {false, false, false};
      ids.push_back(*a);
    }
    OracleIndex::Node cur = node_;
    for (auto a : ids) {
      auto next = edge(cur, a);
      if (!next) return {true, false, false};
      cur = *next;
    }
    return {true, true, oracle_.goal_distance(cur) == 0};
  }

  void question_is(const std::string& q) const { expect(q == r_.question, "question does not re-render"); }
  void option_is(int i, const std::string& text) const {
    expect(r_.options[static_cast<std::size_t>(i)] == text, std::string("option ") + option_letter(i) + " does not re-render");
  }

  bool answer(const json& c) {
    switch (r_.task) {
      case Task::app: {
        const ActionId a = action(c["action"]);
        question_is(phrasing::app_bool(rd_.render_action(a)));
        return edge(node_, a).has_value();
      }
      case Task::prog: {
        const ActionId a = action(c["action"]);
        const auto fs = atoms(c["facts"]);
        question_is(phrasing::prog_bool(facts_text(fs), rd_.render_action(a)));
        return holds_after(a, fs);
      }
      case Task::reach: {
        const auto fs = atoms(c["facts"]);
        question_is(phrasing::reach_bool(facts_text(fs)));
        return reachable(fs);
      }
      case Task::areach:
        question_is(phrasing::areach_bool(ref_text(c)));
        return action_reachable(c);
      case Task::val: {
        const auto texts = sequence(c["sequence"]);
        const auto claim = c["claim"].get<std::string>();
        const auto v = walk(texts);
        if (claim == "valid") {
          question_is(phrasing::val_bool(phrasing::ValClaim::valid, texts));
          return v[0];
        }
        if (claim == "applicable") {
          question_is(phrasing::val_bool(phrasing::ValClaim::applicable, texts));
          return v[1];
        }
        expect(claim == "a plan", "unknown validation claim");
        question_is(phrasing::val_bool(phrasing::ValClaim::plan, texts));
        return v[2];
      }
      case Task::just: {
        const auto plan = plan_texts(c["plan"]);
        const auto& rem = c["removal"];
        question_is(phrasing::just_bool(plan, action_texts(rem["actions"])));
        return removable(plan, rem);
      }
      case Task::land: {
        const AtomId p = atom(c["fact"]);
        question_is(phrasing::land_bool(rd_.render_fact(p)));
        return tri(oracle_.is_landmark(node_, p), "landmark status");
      }
    }
    return false;
  }

  bool option(int i) {
    static const json kNone;
    const json& o = r_.task == Task::val ? kNone : r_.check["options"][static_cast<std::size_t>(i)];
    switch (r_.task) {
      case Task::app: {
        if (i == 0) question_is(phrasing::app_mcq());
        const ActionId a = action(o["action"]);
        option_is(i, rd_.render_action(a));
        return edge(node_, a).has_value();
      }
      case Task::prog: {
        const ActionId a = action(r_.check["action"]);
        if (i == 0) question_is(phrasing::prog_mcq(rd_.render_action(a)));
        const auto fs = atoms(o["facts"]);
        option_is(i, facts_text(fs));
        return holds_after(a, fs);
      }
      case Task::reach: {
        if (i == 0) question_is(phrasing::reach_mcq());
        const auto fs = atoms(o["facts"]);
        option_is(i, facts_text(fs));
        return reachable(fs);
      }
      case Task::areach:
        if (i == 0) question_is(phrasing::areach_mcq());
        option_is(i, ref_text(o));
        return action_reachable(o);
      case Task::val: {
        const auto texts = sequence(r_.check["sequence"]);
        if (i == 0) question_is(phrasing::val_mcq(texts));
        const auto& fixed = phrasing::val_options();
        const auto it = std::find(fixed.begin(), fixed.end(), r_.options[static_cast<std::size_t>(i)]);
        expect(it != fixed.end(), "unknown validation option");
        const auto v = walk(texts);
        const int verdict = !v[0] ? 0 : !v[1] ? 1 : !v[2] ? 2 : 3;
        return it - fixed.begin() == verdict;
      }
      case Task::just: {
        const auto plan = plan_texts(r_.check["plan"]);
        const auto removed = action_texts(o["actions"]);
        if (i == 0) question_is(phrasing::just_mcq(plan, removed.size() == 2));
        option_is(i, phrasing::conjunction(removed));
        return removable(plan, o);
      }
      case Task::land: {
        if (i == 0) question_is(phrasing::land_mcq());
        const AtomId p = atom(o["fact"]);
        option_is(i, rd_.render_fact(p));
        return tri(oracle_.is_landmark(node_, p), "landmark status");
      }
    }
    return false;
  }

  bool holds_after(ActionId a, const std::vector<AtomId>& fs) const {
    auto next = edge(node_, a);
    expect(next.has_value(), "progression action is not applicable");
    const State& t = oracle_.state(*next);
    for (auto f : fs)
      if (!t.contains(f)) return false;
    return true;
  }

  bool reachable(const std::vector<AtomId>& fs) const {
    expect(fs.size() == 1 || fs.size() == 2, "reachability option must name one or two facts");
    if (fs.size() == 1) return tri(oracle_.atom_reachable(node_, fs[0]), "reachability");
    return tri(oracle_.pair_coreachable(node_, fs[0], fs[1]), "reachability");
  }

  bool action_reachable(const json& ref) const {
    const std::string text = ref_text(ref);
    auto a = rd_.parse_action_name(text);
    if (!a) return false;
    return tri(oracle_.action_applicable_somewhere(node_, *a), "action reachability");
  }

  std::vector<std::string> sequence(const json& refs) const {
    std::vector<std::string> out;
    for (const auto& ref : refs) out.push_back(ref_text(ref));
    return out;
  }

  std::vector<std::string> action_texts(const json& names) const {
    std::vector<std::string> out;
    for (const auto& n : names) out.push_back(rd_.render_action(action(n)));
    return out;
  }

  std::vector<std::string> plan_texts(const json& names) const {
    auto texts = action_texts(names);
    expect(walk(texts)[2], "justification plan is not a plan");
    return texts;
  }

  /// The named actions must occur consecutively in the plan at `index` to
  /// be removable; otherwise the option is false by construction.
  bool removable(const std::vector<std::string>& plan, const json& removal) const {
    const auto removed = action_texts(removal["actions"]);
    const auto at = std::search(plan.begin(), plan.end(), removed.begin(), removed.end());
    if (removal["index"].is_null()) {
      expect(at == plan.end(), "option without an index occurs in the plan");
      return false;
    }
    const std::size_t index = removal["index"].get<std::size_t>();
    expect(index + removed.size() <= plan.size() &&
               std::equal(removed.begin(), removed.end(), plan.begin() + static_cast<std::ptrdiff_t>(index)),
           "removal does not match the plan");
    std::vector<std::string> reduced(plan.begin(), plan.begin() + static_cast<std::ptrdiff_t>(index));
    reduced.insert(reduced.end(), plan.begin() + static_cast<std::ptrdiff_t>(index + removed.size()), plan.end());
    return walk(reduced)[2];
  }

  const QuestionRecord& r_;
  const GroundTask& task_;
  const Renderer& rd_;
  const OracleIndex& oracle_;
  State state_;
  OracleIndex::Node node_ = 0;
};

}  // namespace

VerifyOutcome verify_record(const QuestionRecord& r, const GroundTask& task, const Renderer& renderer,
                            const OracleIndex& oracle) {
  return Checker(r, task, renderer, oracle).run();
}

void VerifyReport::add(const QuestionRecord& r, const VerifyOutcome& o) {
  auto& tally = by_task[{std::string(task_id(r.task)), std::string(qtype_id(r.qtype))}];
  switch (o.status) {
    case VerifyStatus::confirmed:
      ++tally.confirmed;
      ++total.confirmed;
      break;
    case VerifyStatus::mismatch:
      ++tally.mismatched;
      ++total.mismatched;
      mismatches.emplace_back(r.id, o.note);
      break;
    case VerifyStatus::unverifiable:
      ++tally.unverifiable;
      ++total.unverifiable;
      unverifiable.emplace_back(r.id, o.note);
      break;
  }
}

}  // namespace planq
