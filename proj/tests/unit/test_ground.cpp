#include <gtest/gtest.h>

#include "planq/ground.hpp"
#include "helpers.hpp"

using namespace planq;
using namespace testing_support;


TEST(Ground, FerryP01Counts) {
  auto f = load("ferry", "p01.pddl", false);
  // 4 untyped objects: not-eq 16 + car 4 + location 4 + at-ferry 4 + at 16 + empty-ferry 1 + on 4.
  EXPECT_EQ(f.task->num_atoms(), 49u);
  // sail: 2 ordered location pairs; board, debark: 2 cars x 2 locations each.
  EXPECT_EQ(f.task->num_actions(), 10u);
  EXPECT_TRUE(f.task->find_action("(sail l1 l0)").has_value());
  EXPECT_FALSE(f.task->find_action("(sail l0 l0)").has_value());
  EXPECT_FALSE(f.task->find_action("(board l0 c0)").has_value());
}

TEST(Ground, SwapDropsSelfCancellingInstances) {
  auto f = load("swap", "p01.pddl", false);
  // Instances with a1 == a2 or i1 == i2 add and delete the same atom.
  EXPECT_EQ(f.task->num_actions(), 8u * 7u * 8u * 7u);
  for (const auto& a : f.task->actions)
    for (auto p : a.add) EXPECT_FALSE(std::binary_search(a.del.begin(), a.del.end(), p));
}

TEST(Ground, StaticAndDynamicPartition) {
  auto f = load("ferry", "p01.pddl", false);
  const auto& t = *f.task;
  for (AtomId a = 0; a < t.num_atoms(); ++a) {
    const bool stat = t.predicates[t.atoms[a].predicate].is_static;
    EXPECT_EQ(t.dynamic.contains(a), !stat) << t.atom_name(a);
    if (stat) { EXPECT_NE(t.static_true.contains(a), t.static_false.contains(a)) << t.atom_name(a); }
  }
  EXPECT_TRUE(t.static_true.contains(*t.find_atom("(not-eq l0 l1)")));
  EXPECT_TRUE(t.static_false.contains(*t.find_atom("(not-eq l0 l0)")));
  EXPECT_TRUE(t.dynamic.contains(*t.find_atom("(at-ferry l1)")));
}

TEST(Ground, PrunedAtomsAreNeverReachable) {
  for (const auto& name : bundled_domains()) {
    auto f = load(name, "p02.pddl", false);
    const auto space = naive_bfs(*f.task, f.task->init);
    for (const auto& s : space.states)
      for (AtomId a = 0; a < f.task->num_atoms(); ++a)
        if (f.task->pruned[a]) { EXPECT_FALSE(s.contains(a)) << name << " " << f.task->atom_name(a); }
  }
}

TEST(Ground, TypesBecomeStaticUnaryPredicates) {
  auto f = load("gripper", "p01.pddl", false);
  const auto& t = *f.task;
  auto ball = t.find_predicate("ball");
  ASSERT_TRUE(ball.has_value());
  EXPECT_TRUE(t.predicates[*ball].is_type);
  EXPECT_TRUE(t.static_true.contains(*t.find_atom("(ball ball1)")));
  // Typed arguments only: at takes a ball and a room.
  EXPECT_FALSE(t.find_atom("(at room1 ball1)").has_value());
  EXPECT_EQ(t.objects_of_type("ball").size(), 4u);
}

TEST(Ground, SubtypesAreInstancesOfParent) {
  const auto t = ground_text(R"((define (domain sub) (:requirements :strips :typing)
      (:types vehicle - object truck - vehicle)
      (:predicates (parked ?v - vehicle) (moving ?v - vehicle))
      (:action go :parameters (?v - vehicle) :precondition (parked ?v)
        :effect (and (moving ?v) (not (parked ?v))))))",
                             "(define (problem s) (:domain sub) (:objects t1 - truck v1 - vehicle) "
                             "(:init (parked t1) (parked v1)) (:goal (and (moving t1))))");
  EXPECT_EQ(t.objects_of_type("vehicle").size(), 2u);
  EXPECT_EQ(t.objects_of_type("truck").size(), 1u);
  EXPECT_EQ(t.num_actions(), 2u);
}

TEST(Ground, SelfCancellingActionDropped) {
  const auto t = ground_text(R"((define (domain c) (:requirements :strips)
      (:predicates (p ?x) (q ?x))
      (:action flip :parameters (?x) :precondition (q ?x) :effect (and (p ?x) (not (p ?x))))
      (:action set :parameters (?x) :precondition (q ?x) :effect (p ?x))))",
                             "(define (problem c1) (:domain c) (:objects a) (:init (q a)) (:goal (p a)))");
  EXPECT_FALSE(t.find_action("(flip a)").has_value());
  EXPECT_TRUE(t.find_action("(set a)").has_value());
}

TEST(Ground, ResourceLimit) {
  const auto d = pddl::load_domain((domains_dir() / "swap/domain.pddl").string());
  const auto p = pddl::load_problem((domains_dir() / "swap/problems/p01.pddl").string(), d);
  GroundOptions small;
  small.max_actions = 100;
  EXPECT_THROW(ground_task(d, p, small), ResourceError);
}

TEST(Ground, MakeStateKeepsStatics) {
  auto f = load("ferry", "p01.pddl", false);
  const auto& t = *f.task;
  const State s = t.make_state({*t.find_atom("(at-ferry l1)"), *t.find_atom("(empty-ferry)")});
  EXPECT_TRUE(s.contains(*t.find_atom("(not-eq l0 l1)")));
  EXPECT_TRUE(s.contains(*t.find_atom("(at-ferry l1)")));
  EXPECT_FALSE(s.contains(*t.find_atom("(at-ferry l0)")));
}
