#pragma once

#include <string>
#include <utility>
#include <vector>

#include "homsl/core.hpp"

namespace homsl {

// Automaton formulas are goals built from facts "P x" / "P c", nested
// clauses "forall zs. U => P (h zs)" and conjunction.
struct AutomatonCheck {
  bool ok = false;
  std::string reason;
  Goal formula;  // canonical, when ok
};

// Classifies g as an automaton formula about `free` (closed when empty).
AutomatonCheck is_automaton(const Goal& g, const std::vector<Symbol>& free);

// Head symbol a fact or nested clause is about.
Symbol subject_of(const Goal& conjunct);

// Splits U into the conjuncts about `vars` and the rest.
std::pair<Goal, Goal> restrict(const Goal& u, const std::vector<Symbol>& vars);

// A closed automaton clause as a definite clause and back.
Goal clause_as_goal(const Clause& c);
Clause goal_as_clause(const Goal& g);
bool is_automaton_clause(const Clause& c);

struct Order1Enumeration {
  std::size_t count = 0;
  std::vector<Goal> clauses;
};

// All order-1 automaton clauses about one k-ary first-order constructor.
Order1Enumeration enumerate_order1(const std::vector<Symbol>& preds, std::size_t k,
                                   std::size_t cap = std::size_t(1) << 20);

}  // namespace homsl
