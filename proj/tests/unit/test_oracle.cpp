#include <gtest/gtest.h>

#include "planq/oracle.hpp"
#include "helpers.hpp"

using namespace planq;
using namespace testing_support;

TEST(Oracle, MatchesNaiveSearch) {
  for (const auto& name : bundled_domains())
    for (const char* p : {"p01.pddl", "p02.pddl", "p05.pddl"}) {
      if (name == "swap" && std::string(p) == "p01.pddl") continue;
      auto f = load(name, p, true);
      const auto space = naive_bfs(*f.task, f.task->init);
      EXPECT_EQ(f.oracle->num_states(), space.states.size()) << name << "/" << p;
      EXPECT_FALSE(f.oracle->truncated());
      for (const auto& s : space.states) EXPECT_TRUE(f.oracle->find(s).has_value());
    }
}

TEST(Oracle, FerryP01) {
  auto f = load("ferry", "p01.pddl", true);
  const auto& o = *f.oracle;
  EXPECT_EQ(o.num_states(), 16u);
  EXPECT_EQ(o.find(f.task->init), OracleIndex::Node{0});
  EXPECT_EQ(o.goal_distance(0), 6);
  EXPECT_EQ(o.shortest_plan(0)->size(), 6u);
  EXPECT_EQ(o.goal_reachable(0), Tri::yes);
  EXPECT_EQ(o.atom_reachable(0, *f.task->find_atom("(at c0 l1)")), Tri::yes);
  EXPECT_EQ(o.atom_reachable(0, *f.task->find_atom("(not-eq l0 l0)")), Tri::no);
  EXPECT_EQ(o.pair_coreachable(0, *f.task->find_atom("(on c0)"), *f.task->find_atom("(on c1)")), Tri::no);
  EXPECT_EQ(o.action_applicable_somewhere(0, *f.task->find_action("(sail l1 l0)")), Tri::yes);
}

TEST(Oracle, SwapHasEveryPermutation) {
  auto f = load("swap", "p01.pddl", true);
  EXPECT_EQ(f.oracle->num_states(), 40320u);
}

TEST(Oracle, CapTruncatesAndAnswersUnknown) {
  auto f = load("ferry", "p03.pddl", false);
  const auto o = OracleIndex::build(*f.task, f.task->init, 10);
  EXPECT_TRUE(o.truncated());
  EXPECT_LE(o.num_states(), 10u);
  const AtomId far = *f.task->find_atom("(at c0 l0)");
  const auto answer = o.atom_reachable(0, far);
  if (!f.task->init.contains(far)) { EXPECT_NE(answer, Tri::no); }
  EXPECT_EQ(o.atom_reachable(0, *f.task->find_atom("(not-eq l0 l0)")), Tri::unknown);
}

TEST(Oracle, EnumeratedPlansAreValidAndBounded) {
  auto f = load("ferry", "p01.pddl", true);
  const auto plans = f.oracle->enumerate_plans(0, 8, 1000);
  ASSERT_FALSE(plans.empty());
  std::set<std::vector<ActionId>> unique(plans.begin(), plans.end());
  EXPECT_EQ(unique.size(), plans.size());
  for (const auto& p : plans) {
    EXPECT_LE(p.size(), 8u);
    EXPECT_GE(p.size(), 6u);
    EXPECT_TRUE(apply_actions(*f.task, f.task->init, p).verdict.goal_reaching);
  }
  EXPECT_EQ(f.oracle->enumerate_plans(0, 5, 1000).size(), 0u);
  EXPECT_LE(f.oracle->enumerate_plans(0, 8, 3).size(), 3u);
}

TEST(Oracle, LandmarkQueryAgreesWithPlans) {
  auto f = load("ferry", "p01.pddl", true);
  const auto& t = *f.task;
  const auto plans = f.oracle->enumerate_plans(0, 6, 1000);
  for (AtomId a = 0; a < t.num_atoms(); ++a) {
    if (t.init.contains(a)) continue;
    const bool on_all_optimal = std::all_of(plans.begin(), plans.end(), [&](const auto& p) {
      for (const auto& s : state_trace(t, t.init, p))
        if (s.contains(a)) return true;
      return false;
    });
    // A landmark of every plan must be on every optimal plan.
    if (f.oracle->is_landmark(0, a) == Tri::yes) { EXPECT_TRUE(on_all_optimal) << t.atom_name(a); }
  }
}
