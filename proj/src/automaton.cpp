#include "homsl/automaton.hpp"

#include <algorithm>
#include <set>

namespace homsl {

namespace {

bool args_are_binders(const Term& head, const std::vector<Symbol>& bs) {
  if (head->args.size() != bs.size()) return false;
  for (std::size_t i = 0; i < bs.size(); ++i)
    if (head->args[i]->head != bs[i] || !head->args[i]->args.empty()) return false;
  return true;
}

bool contains(const std::vector<Symbol>& vs, Symbol v) {
  return std::find(vs.begin(), vs.end(), v) != vs.end();
}

// Empty string when accepted.
std::string check(const Goal& g, const std::vector<Symbol>& delta) {
  switch (g->kind) {
    case GoalKind::True: return "";
    case GoalKind::And:
      for (const auto& c : g->conj)
        if (auto r = check(c, delta); !r.empty()) return r;
      return "";
    case GoalKind::Exists: return "existential quantifier in automaton formula";
    case GoalKind::Atom: {
      const Term& a = g->atom;
      if (a->head->kind != SymKind::Predicate) return "atom not headed by a predicate: " + to_string(a);
      if (a->args.size() != 1) return "atom is not monadic: " + to_string(a);
      const Term& s = a->args[0];
      if (!s->args.empty()) return "fact subject is not a symbol: " + to_string(a);
      if (delta.empty()) {
        if (s->head->kind == SymKind::Variable) return "free variable " + s->head->name + " in closed clause";
        return "";
      }
      if (s->head->kind != SymKind::Variable)
        return "constant " + s->head->name + " in nested position";
      if (!contains(delta, s->head))
        return "variable " + s->head->name + " is not bound by the immediately enclosing clause";
      return "";
    }
    case GoalKind::Imp: {
      if (g->head->kind != GoalKind::Atom) return "nested clause head is not an atom";
      const Term& a = g->head->atom;
      if (a->head->kind != SymKind::Predicate || a->args.size() != 1)
        return "nested clause head is not a monadic atom";
      const Term& s = a->args[0];
      if (!args_are_binders(s, g->binders)) return "clause head arguments are not exactly its binders";
      if (delta.empty()) {
        if (s->head->kind != SymKind::Constructor)
          return "closed clause about non-constructor " + s->head->name;
      } else {
        if (s->head->kind != SymKind::Variable) return "nested clause about constructor " + s->head->name;
        if (!contains(delta, s->head))
          return "nested clause about " + s->head->name + ", which is not bound by the immediately enclosing clause";
      }
      if (g->body->kind != GoalKind::True && g->binders.empty()) return "clause body without binders";
      std::vector<Symbol> inner = g->binders;
      if (inner.empty() && g->body->kind == GoalKind::True) return "";
      return check(g->body, inner);
    }
  }
  return "unknown goal";
}

}  // namespace

AutomatonCheck is_automaton(const Goal& g, const std::vector<Symbol>& free) {
  AutomatonCheck r;
  r.reason = check(g, free);
  r.ok = r.reason.empty();
  if (r.ok) r.formula = canonicalize_goal(g, 0);
  return r;
}

Symbol subject_of(const Goal& c) {
  if (c->kind == GoalKind::Atom) return c->atom->args.at(0)->head;
  if (c->kind == GoalKind::Imp) return c->head->atom->args.at(0)->head;
  return nullptr;
}

std::pair<Goal, Goal> restrict(const Goal& u, const std::vector<Symbol>& vars) {
  std::vector<Goal> in, out;
  for (const auto& c : conjuncts(u)) (contains(vars, subject_of(c)) ? in : out).push_back(c);
  return {g_and(std::move(in)), g_and(std::move(out))};
}

Goal clause_as_goal(const Clause& c) {
  if (c.binders.empty() && c.body->kind == GoalKind::True) return g_atom(c.head);
  return g_imp(c.binders, c.body, g_atom(c.head));
}

Clause goal_as_clause(const Goal& g) {
  Clause c;
  if (g->kind == GoalKind::Atom) {
    c.body = g_true();
    c.head = g->atom;
    return c;
  }
  c.binders = g->binders;
  c.body = g->body;
  c.head = g->head->atom;
  return c;
}

bool is_automaton_clause(const Clause& c) { return is_automaton(clause_as_goal(c), {}).ok; }

Order1Enumeration enumerate_order1(const std::vector<Symbol>& preds, std::size_t k, std::size_t cap) {
  Order1Enumeration out;
  std::vector<Sort> args(k, iota());
  Symbol f = con("f", arrows(args, iota()));
  std::vector<Symbol> ys;
  for (std::size_t i = 0; i < k; ++i) ys.push_back(var("Y" + std::to_string(i + 1), iota()));
  std::vector<Goal> facts;
  for (Symbol q : preds)
    for (Symbol y : ys) facts.push_back(g_atom(mk(q, {mk(y)})));
  if (facts.size() >= 63) throw Error("BudgetExceeded", "order-1 enumeration too large");
  std::size_t bodies = std::size_t(1) << facts.size();
  if (preds.size() * bodies > cap) throw Error("BudgetExceeded", "order-1 enumeration exceeds cap");
  std::set<std::string> seen;
  for (Symbol p : preds) {
    Term head = mk(p, {mk(f, var_terms(ys))});
    for (std::size_t mask = 0; mask < bodies; ++mask) {
      std::vector<Goal> body;
      for (std::size_t b = 0; b < facts.size(); ++b)
        if (mask >> b & 1) body.push_back(facts[b]);
      Clause c{ys, g_and(std::move(body)), head};
      Goal g = canonicalize_goal(clause_as_goal(c), 0);
      if (seen.insert(to_string(g)).second) out.clauses.push_back(g);
    }
  }
  out.count = out.clauses.size();
  return out;
}

}  // namespace homsl
