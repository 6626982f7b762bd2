#pragma once

#include <string>
#include <vector>

#include "homsl/core.hpp"
#include "homsl/types_bridge.hpp"

namespace homsl {

// Higher-order recursion scheme with intersection-typed terminals.
// States are the base types; the first one is the designated start state.
struct Hors {
  struct Terminal {
    Symbol sym;
    IType type;
  };
  // Parameters are variables, or nullary terminals acting as patterns.
  struct Rule {
    Symbol head;
    std::vector<Term> params;
    Term body;
  };
  std::vector<Symbol> states;
  std::vector<Terminal> terminals;
  std::vector<Symbol> nonterminals;
  std::vector<Rule> rules;
  Symbol start = nullptr;
};

// Text format, one declaration per line, each ending in '.':
//   states q1 .. qk.
//   terminal NAME : SORT = TYPE.
//   rule F Y1 .. Yn = TERM.
//   start S.
// Nonterminal sorts are inferred from the rules.
Hors parse_hors(const std::string& text);
std::string print_hors(const Hors& h);

// One clause "forall ys. q t => q (F ys)" per rule and state, plus the
// clauses asserting each terminal's type. Goal: first state holds of start.
Program import_hors(const Hors& h);

// Existential-free MSL(omega) program as a scheme whose start symbol
// reduces to "true" exactly when the goal is provable.
Hors emit_hors(const Program& p);

}  // namespace homsl
