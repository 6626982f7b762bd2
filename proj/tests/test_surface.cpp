#include <gtest/gtest.h>

#include "homsl/surface.hpp"
#include "support.hpp"

using namespace homsl;
using homsl::testing::corpus_path;

TEST(Parse, SmallProgram) {
  Program p = parse_program("data a:i. data c:i->i->i. pred P:i->o. P (c X Y) <= P X /\\ P Y. ?- P (c a a).");
  EXPECT_EQ(p.clauses.size(), 1u);
  ASSERT_TRUE(p.goal.has_value());
  EXPECT_EQ(to_string(*p.goal), "P (c a a)");
}

TEST(Parse, LazyIoCorpusHasEighteenClauses) {
  Program p = parse_file(corpus_path("lazy_io.homsl"));
  EXPECT_EQ(p.clauses.size(), 18u);
  EXPECT_TRUE(p.goal.has_value());
}

TEST(Parse, NonLinearHeadIsRejected) {
  try {
    parse_program("data f : i -> i -> i. pred P : i -> o. P (f X X) <= true.");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "NonLinearHead");
  }
}

TEST(Parse, MissingFileIsIoError) {
  try {
    parse_file("/nonexistent/missing.homsl");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "IoError");
  }
}

TEST(Print, EmptyProgramPrintsDeclarationsOnly) {
  Program p = parse_program("data a : i. pred P : i -> o.");
  std::string s = print_program(p);
  EXPECT_NE(s.find("data a : i."), std::string::npos);
  EXPECT_NE(s.find("pred P : i -> o."), std::string::npos);
  EXPECT_EQ(s.find("<="), std::string::npos);
}

class CorpusRoundTrip : public ::testing::TestWithParam<const char*> {};

TEST_P(CorpusRoundTrip, PrintThenParseIsStable) {
  Program p = parse_file(corpus_path(GetParam()));
  std::string once = print_program(p);
  Program q = parse_program(once);
  EXPECT_EQ(print_program(q), once);
  EXPECT_EQ(q.clauses.size(), p.clauses.size());
}

INSTANTIATE_TEST_SUITE_P(Corpus, CorpusRoundTrip,
                         ::testing::Values("lazy_io.homsl", "ho_transform.homsl", "ho_transform_msl.homsl"));

TEST(Print, NestedClausesReparse) {
  Program sig = parse_program("data d : ((i -> i) -> i) -> i. pred P : i -> o. pred Q : i -> o. pred R : i -> o.");
  std::vector<Symbol> fv;
  Goal g = parse_goal(sig, "forall X. (forall Y. (forall Z. P Z /\\ Q Z => R (Y Z)) => R (X Y)) => P (d X)", fv);
  std::string printed = print_formula(canonicalize_goal(g));
  std::vector<Symbol> fv2;
  Goal h = parse_goal(sig, printed, fv2);
  EXPECT_TRUE(goal_equal(canonicalize_goal(g), canonicalize_goal(h)));
}

TEST(Parse, SortsAreRightAssociative) {
  EXPECT_EQ(parse_sort("i -> i -> o"), arrow(iota(), arrow(iota(), omicron())));
  EXPECT_EQ(parse_sort("(i -> i) -> i"), arrow(arrow(iota(), iota()), iota()));
}
