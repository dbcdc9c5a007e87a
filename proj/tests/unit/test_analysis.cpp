#include <gtest/gtest.h>

#include "planq/analysis.hpp"
#include "helpers.hpp"

using namespace planq;
using namespace testing_support;

namespace {

const char* kThreePorts = R"((define (problem three) (:domain ferry) (:objects l0 l1 l2 c0)
  (:init (not-eq l0 l1) (not-eq l0 l2) (not-eq l1 l0) (not-eq l1 l2) (not-eq l2 l0) (not-eq l2 l1)
         (location l0) (location l1) (location l2) (car c0) (at-ferry l0) (empty-ferry) (at c0 l0))
  (:goal (and (at-ferry l2)))))";

const char* kTwoPorts = R"((define (problem two) (:domain ferry) (:objects l0 l1 c0)
  (:init (not-eq l0 l1) (not-eq l1 l0) (location l0) (location l1) (car c0)
         (at-ferry l0) (empty-ferry) (at c0 l0))
  (:goal (and (at-ferry l1)))))";

std::vector<AtomId> reached_atoms(const NaiveSpace& space) {
  std::set<AtomId> out;
  for (const auto& s : space.states)
    for (auto a : s.to_vector()) out.insert(a);
  return {out.begin(), out.end()};
}

}  // namespace

TEST(Relaxed, OverApproximatesEveryBundledProblem) {
  for (const auto& name : bundled_domains())
    for (const char* p : {"p01.pddl", "p02.pddl", "p03.pddl"}) {
      auto f = load(name, p, false);
      if (name == "swap" && std::string(p) == "p01.pddl") continue;  // 8! states
      const auto space = naive_bfs(*f.task, f.task->init);
      const auto r = relaxed_reachable(*f.task, f.task->init);
      for (auto a : reached_atoms(space)) EXPECT_TRUE(r.atom(a)) << name << "/" << p << " " << f.task->atom_name(a);
      // And for states deeper in the space.
      const auto& mid = space.states[space.states.size() / 2];
      const auto rm = relaxed_reachable(*f.task, mid);
      for (auto a : reached_atoms(naive_bfs(*f.task, mid))) EXPECT_TRUE(rm.atom(a));
    }
}

TEST(Relaxed, HaddOnWorkedExampleState) {
  auto f = load("ferry", "p01.pddl", false);
  // Hand count: at c0 l1 needs board c0 l0 (1) + sail l0 l1 (1) + debark (1) = 3 plus its
  // at-ferry precondition; at c1 l1 needs sail (1) + debark (1) = 2. Summed: 6.
  EXPECT_EQ(RelaxedExplorer(*f.task).h_add(f.task->init), 6);
  EXPECT_EQ(RelaxedExplorer(*f.task).h_add(naive_bfs(*f.task, f.task->init).states.front()), 6);
}

TEST(Relaxed, HaddMinusOneWhenGoalUnreachable) {
  const auto t = ferry_with(R"((define (problem stuck) (:domain ferry) (:objects l0 l1 c0)
    (:init (location l0) (location l1) (car c0) (at-ferry l0) (empty-ferry) (at c0 l0))
    (:goal (and (at c0 l1)))))");
  EXPECT_EQ(RelaxedExplorer(t).h_add(t.init), -1);
  EXPECT_FALSE(relaxed_reachable(t, t.init).atom(*t.find_atom("(at c0 l1)")));
  EXPECT_EQ(RelaxedExplorer(t).h_add(t.make_state({*t.find_atom("(at c0 l1)")})), 0);
}

TEST(Mutex, SoundOnReachableStates) {
  for (const auto& name : bundled_domains())
    for (const char* p : {"p01.pddl", "p02.pddl", "p03.pddl"}) {
      if (name == "swap" && std::string(p) == "p01.pddl") continue;
      auto f = load(name, p, false);
      const auto m = compute_mutexes(*f.task);
      for (const auto& s : naive_bfs(*f.task, f.task->init).states)
        for (const auto& [a, b] : m.pairs())
          ASSERT_FALSE(s.contains(a) && s.contains(b))
              << name << "/" << p << " " << f.task->atom_name(a) << " " << f.task->atom_name(b);
    }
}

TEST(Mutex, FerryCarriesOneCar) {
  auto f = load("ferry", "p02.pddl", false);
  const auto& t = *f.task;
  const auto m = compute_mutexes(t);
  const AtomId empty = *t.find_atom("(empty-ferry)");
  for (const char* c : {"c0", "c1"}) {
    const AtomId on = *t.find_atom(std::string("(on ") + c + ")");
    EXPECT_TRUE(m.is_mutex(empty, on)) << c;
    EXPECT_TRUE(m.is_mutex(on, empty)) << c;
  }
  EXPECT_TRUE(m.is_mutex(*t.find_atom("(on c0)"), *t.find_atom("(on c1)")));
  EXPECT_TRUE(m.is_mutex(*t.find_atom("(at-ferry l0)"), *t.find_atom("(at-ferry l1)")));
  EXPECT_FALSE(m.is_mutex(*t.find_atom("(at c0 l0)"), *t.find_atom("(at c1 l0)")));
  for (const auto& [a, b] : m.pairs()) EXPECT_LT(a, b);
}

TEST(Landmarks, SoundAgainstExplicitSpace) {
  for (const auto& name : bundled_domains())
    for (const char* p : {"p01.pddl", "p02.pddl", "p03.pddl"}) {
      if (name == "swap" && std::string(p) == "p01.pddl") continue;
      auto f = load(name, p, true);
      const auto& o = *f.oracle;
      for (OracleIndex::Node n = 0; n < o.num_states(); n += 7) {
        const auto lm = landmarks_rhw(*f.task, o.state(n));
        if (lm.goal_unreachable) continue;
        for (auto a : lm.landmarks.to_vector())
          EXPECT_EQ(o.is_landmark(n, a), Tri::yes) << name << "/" << p << " " << f.task->atom_name(a);
      }
    }
}

TEST(Landmarks, WorkedExampleStateNeedsFerryAtL1) {
  auto f = load("ferry", "p01.pddl", true);
  const auto& t = *f.task;
  const auto lm = landmarks_rhw(t, t.init);
  const AtomId l1 = *t.find_atom("(at-ferry l1)");
  EXPECT_TRUE(lm.landmarks.contains(l1));
  EXPECT_TRUE(lm.landmarks.contains(*t.find_atom("(at c0 l1)")));
  EXPECT_FALSE(lm.landmarks.contains(*t.find_atom("(at c1 l0)")));
  // Every non-goal landmark explains itself by a parent chain reaching a goal.
  for (auto a : lm.landmarks.to_vector()) {
    AtomId cur = a;
    for (int guard = 0; !t.goal.contains(cur) && guard < 100; ++guard) {
      auto it = lm.parent.find(cur);
      if (it == lm.parent.end()) break;
      cur = it->second;
    }
    if (!t.init.contains(a)) { EXPECT_TRUE(t.goal.contains(cur)) << t.atom_name(a); }
  }
}

TEST(Landmarks, NegativesAvoidedByWitness) {
  auto f = load("ferry", "p01.pddl", true);
  const auto& t = *f.task;
  const auto shortest = *f.oracle->shortest_plan(0);
  std::vector<Plan> plans{make_plan(t, t.init, shortest)};
  const auto neg = landmark_negatives(t, t.init, plans);
  EXPECT_TRUE(neg.count(*t.find_atom("(at c1 l0)")));
  EXPECT_FALSE(neg.count(*t.find_atom("(at-ferry l1)")));
  for (const auto& [atom, idx] : neg) {
    ASSERT_LT(idx, plans.size());
    for (const auto& s : plans[idx].trace) EXPECT_FALSE(s.contains(atom));
    if (t.dynamic.contains(atom) && !t.init.contains(atom)) {
      EXPECT_NE(f.oracle->is_landmark(0, atom), Tri::yes) << t.atom_name(atom);
    }
  }
  std::vector<Plan> bad{make_plan(t, t.init, ids(t, {"(debark c1 l0)"}))};
  EXPECT_THROW(landmark_negatives(t, t.init, bad), ContractViolation);
}

TEST(Justification, RemovablePairInDetour) {
  const auto t = ferry_with(kTwoPorts);
  const auto plan = ids(t, {"(sail l0 l1)", "(sail l1 l0)", "(sail l0 l1)"});
  EXPECT_TRUE(justification_check(t, t.init, plan, {1, 2}));
  EXPECT_TRUE(justification_check(t, t.init, plan, {0, 2}));
  EXPECT_FALSE(justification_check(t, t.init, plan, {0, 1}));
  EXPECT_FALSE(justification_check(t, t.init, plan, {1, 1}));
  EXPECT_THROW(justification_check(t, t.init, plan, {2, 2}), ContractViolation);
  EXPECT_THROW(justification_check(t, t.init, plan, {0, 3}), ContractViolation);
}

TEST(Justification, OptimalPlanHasNoRemovableAction) {
  auto f = load("ferry", "p01.pddl", true);
  const auto& t = *f.task;
  const auto plan = *f.oracle->shortest_plan(0);
  ASSERT_EQ(plan.size(), 6u);
  for (std::size_t i = 0; i < plan.size(); ++i) EXPECT_FALSE(justification_check(t, t.init, plan, {i, 1}));
  for (std::size_t i = 0; i + 1 < plan.size(); ++i) EXPECT_FALSE(justification_check(t, t.init, plan, {i, 2}));
}

TEST(Truncate, KeepsTwoActionsPastFirstGoal) {
  const auto t = ferry_with(kThreePorts);
  const auto plan = ids(t, {"(sail l0 l1)", "(sail l1 l2)", "(sail l2 l0)", "(sail l0 l2)", "(sail l2 l1)",
                            "(sail l1 l0)", "(sail l0 l1)", "(sail l1 l0)", "(sail l0 l2)"});
  EXPECT_EQ(truncate_after_goal(t, t.init, plan), std::vector<ActionId>(plan.begin(), plan.begin() + 4));
}

TEST(Truncate, KeepsOriginalWhenCutIsNotGoal) {
  const auto t = ferry_with(kThreePorts);
  const auto plan = ids(t, {"(sail l0 l2)", "(sail l2 l0)", "(sail l0 l1)", "(sail l1 l2)"});
  EXPECT_EQ(truncate_after_goal(t, t.init, plan), plan);
}

TEST(Truncate, ShortPlanUnchanged) {
  const auto t = ferry_with(kThreePorts);
  const auto plan = ids(t, {"(sail l0 l1)", "(sail l1 l2)"});
  EXPECT_EQ(truncate_after_goal(t, t.init, plan), plan);
  const auto never = ids(t, {"(sail l0 l1)"});
  EXPECT_EQ(truncate_after_goal(t, t.init, never), never);
}
