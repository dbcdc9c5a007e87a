#include <gtest/gtest.h>

#include <map>

#include "planq/audit.hpp"
#include "planq/pipeline.hpp"
#include "helpers.hpp"

using namespace planq;
using namespace testing_support;

namespace {

std::vector<State> some_states(const Fixture& f, std::size_t n) {
  std::vector<State> out;
  const auto& o = *f.oracle;
  const std::size_t step = std::max<std::size_t>(1, o.num_states() / n);
  for (OracleIndex::Node i = 0; i < o.num_states() && out.size() < n; i += step) out.push_back(o.state(i));
  return out;
}

void expect_well_formed(const QuestionRecord& r) {
  EXPECT_FALSE(r.context.empty());
  EXPECT_FALSE(r.question.empty());
  // Mcq rationales are written when positions are placed.
  EXPECT_NE(r.rationale.empty() && r.rationale_head.empty(), true);
  if (r.qtype == QType::boolean) {
    EXPECT_TRUE(r.options.empty());
  } else {
    ASSERT_EQ(r.options.size(), 4u) << r.question;
    EXPECT_EQ(std::set<std::string>(r.options.begin(), r.options.end()).size(), 4u) << r.question;
    EXPECT_GE(r.gold_index, 0);
    EXPECT_LT(r.gold_index, 4);
  }
}

struct Catalog {
  std::vector<LoadedDomain> domains;
  std::vector<DomainProblems> view() const {
    std::vector<DomainProblems> out;
    for (const auto& d : domains) {
      DomainProblems dp{d.name, {}};
      for (const auto& p : d.problems) dp.problems.push_back(p->context.get());
      out.push_back(dp);
    }
    return out;
  }
};

Catalog catalog(std::vector<std::string> names) {
  CatalogOptions opt;
  opt.domains = std::move(names);
  opt.problems_glob = "p0[2-5].pddl";
  return {load_catalog(domains_dir(), opt)};
}

}  // namespace

TEST(TaskGen, WorkedExampleRationaleExact) {
  auto f = load("ferry", "p01.pddl", true);
  const auto& t = *f.task;
  const auto r = make_applicability_bool(*f.ctx, t.init, *t.find_action("(sail l1 l0)"), 1);
  EXPECT_EQ(r.context, slurp(golden_dir() / "worked_example_context.txt"));
  EXPECT_EQ(r.question, "Is the following action applicable in this state:  travel by sea from location l1 to location l0?");
  EXPECT_EQ(r.rationale, slurp(golden_dir() / "worked_example_rationale.txt"));
  EXPECT_FALSE(r.gold_yes);
  EXPECT_EQ(verify_record(r, t, *f.renderer, *f.oracle).status, VerifyStatus::confirmed);
}

TEST(TaskGen, ApplicableActionRationale) {
  auto f = load("ferry", "p01.pddl", true);
  const auto& t = *f.task;
  const auto r = make_applicability_bool(*f.ctx, t.init, *t.find_action("(debark c1 l0)"), 1);
  EXPECT_TRUE(r.gold_yes);
  EXPECT_NE(r.rationale.find("So, the action is applicable."), std::string::npos);
}

TEST(TaskGen, EveryGeneratorOutputVerifies) {
  for (const char* dom : {"ferry", "gripper", "blocksworld"}) {
    auto f = load(dom, "p02.pddl", true);
    std::uint64_t seed = 100;
    for (auto task : kAllTasks)
      for (auto q : {QType::boolean, QType::mcq}) {
        std::size_t produced = 0;
        for (const auto& s : some_states(f, 6))
          for (const auto& r : generate_for_state(task, *f.ctx, s, ++seed, q)) {
            ++produced;
            expect_well_formed(r);
            EXPECT_EQ(r.task, task);
            EXPECT_EQ(r.qtype, q);
            const auto v = verify_record(r, *f.task, *f.renderer, *f.oracle);
            EXPECT_EQ(v.status, VerifyStatus::confirmed)
                << dom << " " << task_id(task) << "/" << qtype_id(q) << ": " << v.note << "\n" << r.question;
          }
        EXPECT_GT(produced, 0u) << dom << " " << task_id(task) << "/" << qtype_id(q);
      }
  }
}

TEST(TaskGen, ApplicabilityAgainstPreconditions) {
  auto f = load("gripper", "p02.pddl", true);
  const auto& t = *f.task;
  for (const auto& s : some_states(f, 10))
    for (const auto& r : gen_applicability(*f.ctx, s, 3, QType::boolean)) {
      auto text = r.question.substr(r.question.find(":  ") + 3);
      text.pop_back();  // '?'
      const auto a = f.renderer->parse_action_name(text);
      ASSERT_TRUE(a.has_value()) << r.question;
      bool holds = true;
      for (auto p : t.actions[*a].pre) holds = holds && s.contains(p);
      EXPECT_EQ(r.gold_yes, holds);
    }
}

TEST(TaskGen, GeneratorsAreDeterministic) {
  auto f = load("ferry", "p03.pddl", true);
  for (auto task : kAllTasks)
    for (auto q : {QType::boolean, QType::mcq}) {
      const auto a = generate_for_state(task, *f.ctx, f.task->init, 9, q);
      const auto b = generate_for_state(task, *f.ctx, f.task->init, 9, q);
      ASSERT_EQ(a.size(), b.size());
      for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].question, b[i].question);
        EXPECT_EQ(a[i].options, b[i].options);
        EXPECT_EQ(a[i].check, b[i].check);
      }
    }
}

TEST(TaskGen, ActionReachabilityUsesMutexNegatives) {
  auto f = load_dir(extra_domains() / "switch", "p01.pddl", true);
  const auto& t = *f.task;
  const ActionId short_a = *t.find_action("(short a)");
  EXPECT_TRUE(f.ctx->mutexes().is_mutex(*t.find_atom("(lit a)"), *t.find_atom("(dark a)")));
  EXPECT_TRUE(f.ctx->explorer().explore(t.init).action(short_a));
  EXPECT_EQ(f.oracle->action_applicable_somewhere(0, short_a), Tri::no);
  std::size_t mutex_negatives = 0;
  for (std::uint64_t seed = 0; seed < 60; ++seed)
    for (const auto& r : gen_action_reachability(*f.ctx, t.init, seed, QType::boolean))
      if (r.check.value("source", "") == "mutex") {
        ++mutex_negatives;
        EXPECT_FALSE(r.gold_yes);
        EXPECT_EQ(verify_record(r, t, *f.renderer, *f.oracle).status, VerifyStatus::confirmed);
      }
  EXPECT_GT(mutex_negatives, 0u);
}

TEST(TaskGen, PlaceOptionsMovesGoldAndNotes) {
  auto f = load("ferry", "p02.pddl", true);
  auto recs = gen_applicability(*f.ctx, f.task->init, 4, QType::mcq);
  ASSERT_EQ(recs.size(), 1u);
  auto r = recs[0];
  const auto gold = r.options[0];
  place_options(r, {2, 0, 3, 1});
  EXPECT_EQ(r.gold_index, 1);
  EXPECT_EQ(r.options[1], gold);
  EXPECT_NE(r.rationale.find("So, the answer is B."), std::string::npos);
  EXPECT_EQ(verify_record(r, *f.task, *f.renderer, *f.oracle).status, VerifyStatus::confirmed);
}

TEST(TaskGen, RecordIdIsContentHash) {
  auto f = load("ferry", "p01.pddl", false);
  const auto& t = *f.task;
  const auto a = make_applicability_bool(*f.ctx, t.init, *t.find_action("(sail l1 l0)"), 1);
  auto b = a;
  EXPECT_EQ(record_id(a), record_id(b));
  EXPECT_EQ(record_id(a).size(), 16u);
  b.question += " ";
  EXPECT_NE(record_id(a), record_id(b));
}

TEST(Batch, SizeBalanceAndDeterminism) {
  const auto cat = catalog({"ferry", "swap"});
  GenBatch cfg;
  cfg.seed = 21;
  const auto a = assemble_batch(cat.view(), cfg);
  EXPECT_EQ(a.records.size(), 2u * 7u * 2u * 10u);
  EXPECT_TRUE(a.under_fills.empty());

  std::map<std::tuple<std::string, Task, QType>, std::vector<const QuestionRecord*>> cells;
  std::set<std::string> ids, questions;
  for (const auto& r : a.records) {
    cells[{r.domain, r.task, r.qtype}].push_back(&r);
    EXPECT_TRUE(ids.insert(r.id).second);
    EXPECT_TRUE(questions.insert(r.context + "\n" + r.question).second);
    expect_well_formed(r);
  }
  for (const auto& [key, recs] : cells) {
    EXPECT_EQ(recs.size(), 10u);
    if (std::get<2>(key) == QType::boolean) {
      const auto yes = std::count_if(recs.begin(), recs.end(), [](auto* r) { return r->gold_yes; });
      EXPECT_EQ(yes, 5) << std::get<0>(key) << " " << task_id(std::get<1>(key));
    } else {
      std::array<int, 4> pos{};
      for (auto* r : recs) ++pos[r->gold_index];
      for (int c : pos) EXPECT_TRUE(c == 2 || c == 3) << std::get<0>(key) << " " << task_id(std::get<1>(key));
    }
  }

  const auto b = assemble_batch(cat.view(), cfg);
  ASSERT_EQ(a.records.size(), b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) EXPECT_EQ(a.records[i].id, b.records[i].id);

  cfg.seed = 22;
  const auto c = assemble_batch(cat.view(), cfg);
  std::size_t same = 0;
  for (std::size_t i = 0; i < std::min(a.records.size(), c.records.size()); ++i) same += a.records[i].id == c.records[i].id;
  EXPECT_LT(same, a.records.size() / 2);
}

TEST(Batch, OddCountsStayWithinOne) {
  const auto cat = catalog({"ferry"});
  GenBatch cfg;
  cfg.per_domain = 7;
  cfg.tasks = {Task::app, Task::land};
  const auto res = assemble_batch(cat.view(), cfg);
  std::map<Task, int> yes, no;
  for (const auto& r : res.records)
    if (r.qtype == QType::boolean) ++(r.gold_yes ? yes : no)[r.task];
  for (auto t : cfg.tasks) {
    EXPECT_EQ(yes[t] + no[t], 7);
    EXPECT_LE(std::abs(yes[t] - no[t]), 1);
  }
}

TEST(Batch, UnderFillIsReported) {
  const auto cat = catalog({"swap"});
  GenBatch cfg;
  cfg.per_domain = 5000;
  cfg.tasks = {Task::app};
  cfg.qtypes = {QType::boolean};
  const auto res = assemble_batch(cat.view(), cfg);
  ASSERT_EQ(res.under_fills.size(), 1u);
  EXPECT_EQ(res.under_fills[0].wanted, 5000u);
  EXPECT_EQ(res.under_fills[0].got, res.records.size());
}
