#include <gtest/gtest.h>

#include "homsl/core.hpp"
#include "homsl/surface.hpp"

using namespace homsl;

namespace {

Sort i() { return iota(); }
Sort o() { return omicron(); }

std::string code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return "";
}

}  // namespace

TEST(Sorts, OrderOfBaseAndArrows) {
  EXPECT_EQ(order_of(i()), 0);
  EXPECT_EQ(order_of(o()), 0);
  EXPECT_EQ(order_of(arrow(i(), i())), 1);
  EXPECT_EQ(order_of(arrow(arrow(arrow(i(), i()), i()), i())), 3);
}

TEST(Sorts, HashConsedAndPrinted) {
  EXPECT_EQ(arrow(i(), arrow(i(), o())), arrows({i(), i()}, o()));
  EXPECT_EQ(to_string(arrow(arrow(i(), i()), i())), "(i -> i) -> i");
  EXPECT_EQ(apply_sort(arrows({i(), i()}, i()), 1), arrow(i(), i()));
  EXPECT_EQ(apply_sort(i(), 1), nullptr);
}

TEST(Terms, SortOfApplications) {
  Symbol f = con("f", arrows({i(), i()}, i())), a = con("a", i());
  EXPECT_EQ(sort_of(mk(f, {mk(a)})), arrow(i(), i()));
  Symbol P = pred("P", arrows({arrow(i(), o()), i()}, o())), Q = pred("Q", arrow(i(), o()));
  Symbol x = var("x", i());
  EXPECT_EQ(sort_of({x}, mk(P, {mk(Q), mk(x)})), o());
  Symbol g = con("g", arrow(i(), i()));
  EXPECT_EQ(code_of([&] { sort_of(mk(g, {mk(g)})); }), "UnsortedTerm");
}

TEST(Terms, Depth) {
  Symbol a = con("a", i()), b = con("b", i()), f = con("f", arrow(i(), i())),
         g = con("g", arrows({i(), i()}, i()));
  EXPECT_EQ(depth(mk(a)), 0);
  EXPECT_EQ(depth(mk(f, {mk(a)})), 1);
  EXPECT_EQ(depth(mk(g, {mk(f, {mk(a)}), mk(b)})), 2);
}

TEST(Terms, AppMergesSpines) {
  Symbol g = con("g", arrows({i(), i()}, i())), a = con("a", i());
  Term t = app(mk(g, {mk(a)}), mk(a));
  EXPECT_EQ(t->args.size(), 2u);
  EXPECT_EQ(to_string(t), "g a a");
}

TEST(Terms, SubstitutionIsCaptureAvoiding) {
  Symbol P = pred("P", arrow(i(), o())), f = con("f", arrows({i(), i()}, i()));
  Symbol x = var("x", i()), y = var("y", i());
  // forall y. P y => P (f x y)   with x := y must not capture.
  Goal g = g_imp({y}, g_atom(mk(P, {mk(y)})), g_atom(mk(P, {mk(f, {mk(x), mk(y)})})));
  Goal s = substitute(g, Subst{{x, mk(y)}});
  ASSERT_EQ(s->kind, GoalKind::Imp);
  EXPECT_NE(s->binders[0], y);
  const Term& inner = s->head->atom->args[0];
  EXPECT_EQ(inner->args[0]->head, y);
  EXPECT_EQ(inner->args[1]->head, s->binders[0]);
}

TEST(Programs, HeadShapeChecks) {
  EXPECT_EQ(code_of([] { parse_program("data f : i -> i -> i. pred P : i -> o. P (f X X)."); }), "NonLinearHead");
  EXPECT_EQ(code_of([] { parse_program("data f : i -> i. data g : i -> i. pred P : i -> o. P (f (g X))."); }),
            "NonShallowHead");
  EXPECT_NO_THROW(parse_program("pred Zero : i -> o. pred Leq : i -> i -> o. Leq X Y <= Zero X."));
}

TEST(Programs, FragmentClassification) {
  Program datalog = parse_program("data a : i. data b : i. pred P : i -> o. P a. P b <= P a.");
  EXPECT_EQ(to_string(classify_fragment(datalog)), "MSL(0)");
  Program ho = parse_program(
      "data a : i -> i. data c : i. pred P : (i -> o) -> i -> o. pred Q : i -> o. pred R : i -> o. pred S : i -> o."
      "S x <= P Q x. P x y <= R y /\\ x y. Q (a x) <= R x. R (a x).");
  EXPECT_EQ(to_string(classify_fragment(ho)), "HOMSL(1)");
}

TEST(Canonical, AcuAndIdempotence) {
  Program sig = parse_program("data a : i. pred P : i -> o. pred Q : i -> o. pred R : i -> o.");
  std::vector<Symbol> fv;
  Goal g1 = canonicalize_goal(parse_goal(sig, "(P a /\\ true) /\\ P a", fv));
  EXPECT_EQ(to_string(g1), "P a");
  Goal x = canonicalize_goal(parse_goal(sig, "Q a /\\ P a /\\ R a", fv));
  Goal y = canonicalize_goal(parse_goal(sig, "R a /\\ Q a /\\ P a", fv));
  EXPECT_TRUE(goal_equal(x, y));
}

TEST(Canonical, AlphaEquivalentClausesCoincide) {
  Program sig = parse_program("data f : i -> i. pred P : i -> o. pred Q : i -> o.");
  std::vector<Symbol> fv;
  Goal a = canonicalize_goal(parse_goal(sig, "forall Y. P Y => Q (f Y)", fv));
  Goal b = canonicalize_goal(parse_goal(sig, "forall Z. P Z => Q (f Z)", fv));
  EXPECT_TRUE(goal_equal(a, b));
  EXPECT_EQ(to_string(a), "(forall Z1. P Z1 => Q (f Z1))");
}

TEST(Canonical, NestedNames) {
  EXPECT_EQ(nested_name(1, 2), "Z2");
  EXPECT_EQ(nested_name(2, 1), "W1");
  EXPECT_EQ(nested_name(3, 1), "V3_1");
}
