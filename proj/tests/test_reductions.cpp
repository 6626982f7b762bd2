#include <gtest/gtest.h>

#include <set>

#include "homsl/proofs.hpp"
#include "homsl/reductions.hpp"
#include "homsl/saturation.hpp"
#include "homsl/surface.hpp"
#include "support.hpp"

using namespace homsl;
using homsl::testing::corpus_path;

namespace {

bool has_exists_anywhere(const Program& p) {
  if (p.goal && has_exists(*p.goal)) return true;
  for (const auto& c : p.clauses)
    if (has_exists(c.body)) return true;
  return false;
}

std::string rename(std::string s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s.compare(i, 2, "t#") == 0 && (i == 0 || !is_identifier_char(s[i - 1]))) {
      out += "T";
      ++i;
    } else if (s[i] != '#') {
      out += s[i];
    }
  }
  return out;
}

std::set<std::string> clause_set(const Program& p, bool strip) {
  std::set<std::string> out;
  for (const auto& c : p.clauses) {
    std::string s = to_string(canonicalize_clause(c));
    out.insert(strip ? rename(s) : s);
  }
  return out;
}

}  // namespace

TEST(Adequate, AddsUniversalRelation) {
  Program p = parse_program("data a : i. pred P : i -> o.");
  Program q = ensure_adequate(p);
  Symbol u = find_universal(q, arrow(iota(), omicron()));
  ASSERT_NE(u, nullptr);
  bool axiom = false;
  for (const auto& c : q.clauses) axiom = axiom || (c.head->head == u && c.body->kind == GoalKind::True);
  EXPECT_TRUE(axiom);
}

TEST(Adequate, AddsInhabitantWhenIotaIsEmpty) {
  Program p = parse_program("data f : i -> i. pred P : i -> o.");
  Program q = ensure_adequate(p);
  bool constant = false;
  for (Symbol c : q.constructors) constant = constant || c->sort == iota();
  EXPECT_TRUE(constant);
}

TEST(Adequate, Idempotent) {
  Program p = ensure_adequate(parse_file(corpus_path("ho_transform.homsl")));
  EXPECT_EQ(print_program(ensure_adequate(p)), print_program(p));
}

TEST(PredExistentials, ReplacedByUniversalRelation) {
  Program p = parse_program("data a : i. pred P : i -> o. P a. ?- exists X : i -> o. X a.");
  Program q = eliminate_pred_existentials(p);
  ASSERT_TRUE(q.goal.has_value());
  EXPECT_FALSE(has_exists(*q.goal));
  Symbol u = find_universal(q, arrow(iota(), omicron()));
  ASSERT_NE(u, nullptr);
  EXPECT_EQ(to_string(*q.goal), u->name + " a");
}

TEST(PredExistentials, ExistentialFreeGoalUnchanged) {
  Program p = parse_program("data a : i. pred P : i -> o. P a. ?- P a.");
  EXPECT_EQ(to_string(*eliminate_pred_existentials(p).goal), "P a");
}

TEST(HoPredicates, TransformMatchesFirstOrderEncoding) {
  Program left = parse_file(corpus_path("ho_transform.homsl"));
  Program center = parse_file(corpus_path("ho_transform_msl.homsl"));
  Program out = eliminate_ho_predicates(left);
  EXPECT_EQ(clause_set(out, true), clause_set(center, false));
  ASSERT_TRUE(out.goal.has_value());
  EXPECT_EQ(rename(to_string(*out.goal)), "T (s (a (a c)))");
  EXPECT_TRUE(is_msl_normal(out) || !needs_reduction(out));
}

TEST(HoPredicates, BothGoalsProvable) {
  EXPECT_TRUE(decide(parse_file(corpus_path("ho_transform.homsl"))).provable);
  EXPECT_TRUE(decide(parse_file(corpus_path("ho_transform_msl.homsl"))).provable);
}

TEST(HoPredicates, ReflectionClausesAppearOnce) {
  Program out = eliminate_ho_predicates(parse_file(corpus_path("ho_transform.homsl")));
  auto all = clause_set(out, false);
  EXPECT_EQ(all.size(), out.clauses.size());
}

TEST(Existentials, LazyIoReducesToExistentialFree) {
  Program p = parse_file(corpus_path("lazy_io.homsl"));
  Program r = reduce_all(p);
  EXPECT_FALSE(has_exists_anywhere(r));
  EXPECT_TRUE(is_msl_normal(r));
  EXPECT_TRUE(decide(p).provable);
}

TEST(Existentials, FirstOrderWitness) {
  Program yes = parse_program("data a : i. pred P : i -> o. P a. ?- exists X : i. P X.");
  Program no = parse_program("data a : i. data f : i -> i. pred P : i -> o. P (f X) <= P X. ?- exists X : i. P X.");
  EXPECT_TRUE(decide(yes).provable);
  EXPECT_FALSE(decide(no).provable);
  EXPECT_FALSE(has_exists_anywhere(reduce_all(yes)));
}

TEST(Existentials, HigherOrderWitness) {
  Program p = parse_program(
      "data a : i. data b : i. data f : i -> i. data g : i -> (i -> i) -> i -> i. data h : (i -> i) -> i."
      "pred P : i -> o. pred Q : i -> o."
      "P (g X Y Z) <= true. Q (h X) <= true."
      "?- exists X : i -> i. P (X b) /\\ Q (h X).");
  EXPECT_TRUE(decide(p).provable);
  EXPECT_TRUE(brute_force(p, *p.goal, 3, 4).has_value());
}

TEST(Existentials, ExistentialFreeInputKeepsClauses) {
  Program p = parse_file(corpus_path("ho_transform_msl.homsl"));
  Program q = eliminate_existentials(p);
  EXPECT_EQ(clause_set(q, false), clause_set(p, false));
}

TEST(ReduceAll, IdempotentUpToCanonicalForm) {
  for (const char* f : {"lazy_io.homsl", "ho_transform.homsl", "ho_transform_msl.homsl"}) {
    Program once = reduce_all(parse_file(corpus_path(f)));
    Program twice = reduce_all(once);
    EXPECT_EQ(clause_set(twice, false), clause_set(once, false)) << f;
  }
}

TEST(ReduceAll, PreservesVerdictOnRandomPrograms) {
  std::mt19937 rng(7);
  for (int n = 0; n < 60; ++n) {
    Program p = homsl::testing::random_homsl(rng, 5);
    Program r = reduce_all(p);
    EXPECT_FALSE(has_exists_anywhere(r));
    EXPECT_EQ(decide(p).provable, decide(r).provable) << print_program(p);
  }
}
