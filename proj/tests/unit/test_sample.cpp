#include <gtest/gtest.h>

#include "planq/sample.hpp"
#include "helpers.hpp"

using namespace planq;
using namespace testing_support;

TEST(FindPlans, DeterministicAndValid) {
  auto f = load("ferry", "p02.pddl", true);
  const auto& t = *f.task;
  PlanSearchOptions opt;
  opt.oracle = f.oracle.get();
  const auto a = find_plans(t, t.init, 5, 42, opt);
  const auto b = find_plans(t, t.init, 5, 42, opt);
  ASSERT_FALSE(a.plans.empty());
  ASSERT_EQ(a.plans.size(), b.plans.size());
  for (std::size_t i = 0; i < a.plans.size(); ++i) {
    EXPECT_EQ(a.plans[i].actions, b.plans[i].actions);
    EXPECT_TRUE(a.plans[i].goal_reaching);
    EXPECT_TRUE(apply_actions(t, t.init, a.plans[i].actions).verdict.goal_reaching);
  }
  EXPECT_EQ(a.plans.front().actions.size(), static_cast<std::size_t>(f.oracle->goal_distance(0)));
}

TEST(FindPlans, SearchWithoutOracle) {
  auto f = load("gripper", "p03.pddl", false);
  const auto r = find_plans(*f.task, f.task->init, 3, 1);
  ASSERT_FALSE(r.plans.empty());
  for (const auto& p : r.plans) EXPECT_TRUE(p.goal_reaching);
  EXPECT_FALSE(r.goal_unreachable);
}

TEST(FindPlans, RelaxedUnreachableGoal) {
  const auto t = ferry_with(R"((define (problem stuck) (:domain ferry) (:objects l0 l1 c0)
    (:init (location l0) (location l1) (car c0) (at-ferry l0) (empty-ferry) (at c0 l0))
    (:goal (and (at c0 l1)))))");
  const auto r = find_plans(t, t.init, 3, 1);
  EXPECT_TRUE(r.goal_unreachable);
  EXPECT_TRUE(r.plans.empty());
}

TEST(SampleStates, ReachableDeterministicCapped) {
  auto f = load("blocksworld", "p03.pddl", true);
  const auto& t = *f.task;
  const auto plans = find_plans(t, t.init, 4, 9).plans;
  SampleConfig cfg;
  cfg.seed = 5;
  cfg.state_cap = 30;
  const auto a = sample_states(t, plans, cfg);
  const auto b = sample_states(t, plans, cfg);
  ASSERT_EQ(a.size(), b.size());
  EXPECT_LE(a.size(), 30u);
  EXPECT_GT(a.size(), 0u);
  std::set<std::vector<AtomId>> seen;
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].state, b[i].state);
    EXPECT_TRUE(f.oracle->find(a[i].state).has_value());
    EXPECT_TRUE(seen.insert(a[i].state.to_vector()).second);
  }
  EXPECT_TRUE(a.front().on_plan);
}

TEST(SampleStates, DeadEndFlagIsSound) {
  // Blocksworld has no dead ends; a relaxed dead end must be a true dead end anyway.
  for (const auto& name : bundled_domains()) {
    auto f = load(name, "p02.pddl", true);
    const auto plans = find_plans(*f.task, f.task->init, 3, 2).plans;
    SampleConfig cfg;
    cfg.seed = 11;
    for (const auto& s : sample_states(*f.task, plans, cfg))
      if (s.dead_end) { EXPECT_EQ(f.oracle->goal_reachable(*f.oracle->find(s.state)), Tri::no) << name; }
  }
}

TEST(Rollout, StaysOnApplicableEdges) {
  auto f = load("ferry", "p02.pddl", false);
  const auto& t = *f.task;
  const auto states = random_rollout(t, t.init, 6, 77);
  ASSERT_FALSE(states.empty());
  EXPECT_EQ(states, random_rollout(t, t.init, 6, 77));
  State prev = t.init;
  for (const auto& s : states) {
    bool edge = false;
    for (auto a : applicable_actions(t, prev)) edge = edge || progress(t, prev, a) == s;
    EXPECT_TRUE(edge || s == prev);
    prev = s;
  }
}
