#pragma once

#include <string>
#include <vector>

#include "homsl/core.hpp"

namespace homsl {

enum class Rule { Refl, Step, Assm, AndL, AndR, Imp, Scope, ImpAnd };
std::string rule_name(Rule r);

// V holds automaton clauses (closed clauses as "forall xs. U => P (f xs)" or
// facts); ybar are the variables Assm may make assumptions about.
struct RewriteContext {
  std::vector<Goal> V;
  std::vector<Symbol> ybar;
};

struct RewriteStep {
  Rule rule;
  int side_index = -1;      // index into V extended by enclosing nested bodies
  Goal side_clause;         // null for Scope / ImpAnd
  std::vector<std::string> position;  // conjunct indices and "imp" descents
  Goal result;              // the whole rewritten goal
};

// All one-step reducts, following the rules literally (no normalisation).
std::vector<RewriteStep> reducts(const RewriteContext& ctx, const Goal& g);

// Termination weight from the decidability argument.
long weight(const Goal& g);

std::string format_step(const RewriteStep& s);

}  // namespace homsl
