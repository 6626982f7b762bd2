#include "homsl/types_bridge.hpp"

#include <algorithm>
#include <cctype>

#include "homsl/automaton.hpp"
#include "homsl/saturation.hpp"

namespace homsl {

namespace {

std::string arg_string(const IType& t) {
  if (t.parts.size() == 1 && !t.parts[0]->args.empty()) return "(" + to_string(*t.parts[0]) + ")";
  return to_string(t);
}

}  // namespace

IType top_type() { return {}; }

StrictPtr strict_type(std::vector<IType> args, Symbol base) {
  auto t = std::make_shared<StrictType>();
  t->args = std::move(args);
  t->base = base;
  t->key = to_string(*t);
  return t;
}

IType inter(std::vector<StrictPtr> parts) {
  std::sort(parts.begin(), parts.end(), [](const StrictPtr& a, const StrictPtr& b) { return a->key < b->key; });
  parts.erase(std::unique(parts.begin(), parts.end(),
                          [](const StrictPtr& a, const StrictPtr& b) { return a->key == b->key; }),
              parts.end());
  return IType{std::move(parts)};
}

IType inter(const IType& a, const IType& b) {
  std::vector<StrictPtr> all = a.parts;
  all.insert(all.end(), b.parts.begin(), b.parts.end());
  return inter(std::move(all));
}

IType single(StrictPtr t) { return IType{{std::move(t)}}; }

std::string to_string(const StrictType& t) {
  std::string s;
  for (const auto& a : t.args) s += arg_string(a) + " -> ";
  return s + t.base->name;
}

std::string to_string(const IType& t) {
  if (t.parts.empty()) return "top";
  if (t.parts.size() == 1) return to_string(*t.parts[0]);
  std::string s;
  for (std::size_t i = 0; i < t.parts.size(); ++i) {
    if (i) s += " /\\ ";
    const auto& p = *t.parts[i];
    s += p.args.empty() ? p.base->name : "(" + to_string(p) + ")";
  }
  return s;
}

bool type_equal(const IType& a, const IType& b) {
  if (a.parts.size() != b.parts.size()) return false;
  for (std::size_t i = 0; i < a.parts.size(); ++i)
    if (a.parts[i]->key != b.parts[i]->key) return false;
  return true;
}

void check_type(const IType& t, Sort s) {
  Sort io = arrow(iota(), omicron());
  std::vector<Sort> as = arg_sorts(s);
  if (tail_sort(s) != iota())
    throw Error("SortMismatch", "type " + to_string(t) + " at non-individual sort " + to_string(s));
  for (const auto& p : t.parts) {
    if (p->base->sort != io) throw Error("SortMismatch", "base type " + p->base->name + " is not a monadic predicate");
    if (p->args.size() != as.size())
      throw Error("SortMismatch", "type " + to_string(*p) + " does not fit sort " + to_string(s));
    for (std::size_t i = 0; i < as.size(); ++i) check_type(p->args[i], as[i]);
  }
}

bool well_typed(const IType& t, Sort s) {
  try {
    check_type(t, s);
    return true;
  } catch (const Error&) {
    return false;
  }
}

// ------------------------------------------------------------ parsing

namespace {

struct TypeParser {
  std::string src;
  std::size_t pos = 0;
  const std::function<Symbol(const std::string&)>& base;

  void skip() {
    while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
  }
  bool eat(const std::string& tok) {
    skip();
    if (src.compare(pos, tok.size(), tok) == 0) {
      pos += tok.size();
      return true;
    }
    return false;
  }
  [[noreturn]] void fail(const std::string& what) {
    throw Error("ParseError", "type: " + what + " at offset " + std::to_string(pos) + " in '" + src + "'");
  }
  std::string ident() {
    skip();
    std::size_t b = pos;
    while (pos < src.size() && is_identifier_char(src[pos])) ++pos;
    if (b == pos) fail("expected a name");
    return src.substr(b, pos - b);
  }

  IType arrow_type() {
    IType lhs = inter_type();
    if (!eat("->")) return lhs;
    IType rhs = arrow_type();
    if (rhs.parts.size() != 1) fail("arrow result must be a single strict type");
    std::vector<IType> args{lhs};
    args.insert(args.end(), rhs.parts[0]->args.begin(), rhs.parts[0]->args.end());
    return single(strict_type(std::move(args), rhs.parts[0]->base));
  }
  IType inter_type() {
    IType t = atom_type();
    while (eat("/\\")) t = inter(t, atom_type());
    return t;
  }
  IType atom_type() {
    if (eat("(")) {
      IType t = arrow_type();
      if (!eat(")")) fail("expected ')'");
      return t;
    }
    std::string n = ident();
    if (n == "top") return top_type();
    Symbol q = base(n);
    if (!q) fail("unknown base type " + n);
    return single(strict_type({}, q));
  }
};

}  // namespace

IType parse_type(const std::string& text, const std::function<Symbol(const std::string&)>& base) {
  TypeParser p{text, 0, base};
  IType t = p.arrow_type();
  p.skip();
  if (p.pos != text.size()) p.fail("trailing input");
  return t;
}

// ------------------------------------------------- clauses and types

namespace {

StrictPtr conjunct_type(const Goal& c) {
  if (c->kind == GoalKind::Atom) {
    const Term& a = c->atom;
    if (a->args.size() != 1 || !a->args[0]->args.empty())
      throw Error("NotAutomaton", "fact is not of the form P x: " + to_string(c));
    return strict_type({}, a->head);
  }
  if (c->kind != GoalKind::Imp) throw Error("NotAutomaton", "not an automaton conjunct: " + to_string(c));
  const Term& h = c->head->atom;
  if (h->args.size() != 1) throw Error("NotAutomaton", "bad clause head: " + to_string(c));
  const Term& subj = h->args[0];
  std::size_t m = c->binders.size();
  if (subj->args.size() != m) throw Error("NotAutomaton", "head is not P (h zs): " + to_string(c));
  for (std::size_t i = 0; i < m; ++i)
    if (!subj->args[i]->args.empty() || subj->args[i]->head != c->binders[i])
      throw Error("NotAutomaton", "head is not P (h zs): " + to_string(c));
  std::vector<IType> args;
  for (Symbol z : c->binders) args.push_back(clause_to_type(c->body, z));
  return strict_type(std::move(args), h->head);
}

Goal assert_type(const IType& t, const Term& subject) {
  Sort s = sort_of(subject);
  check_type(t, s);
  std::vector<Sort> as = arg_sorts(s);
  std::vector<Goal> out;
  for (const auto& p : t.parts) {
    if (p->args.empty()) {
      out.push_back(g_atom(mk(p->base, {subject})));
      continue;
    }
    std::vector<Symbol> zs;
    std::vector<Goal> body;
    for (std::size_t i = 0; i < as.size(); ++i) {
      zs.push_back(fresh_var(as[i], "_t"));
      body.push_back(assert_type(p->args[i], mk(zs.back())));
    }
    out.push_back(g_imp(zs, g_and(std::move(body)), g_atom(mk(p->base, {app(subject, var_terms(zs))}))));
  }
  return g_and(std::move(out));
}

}  // namespace

IType clause_to_type(const Goal& u, Symbol subject) {
  std::vector<Symbol> fv;
  free_vars(u, fv);
  AutomatonCheck ac = is_automaton(u, fv);
  if (!ac.ok) throw Error("NotAutomaton", ac.reason);
  std::vector<StrictPtr> parts;
  for (const auto& c : conjuncts(u)) {
    if (subject_of(c) == subject) parts.push_back(conjunct_type(c));
  }
  return inter(std::move(parts));
}

IType clause_to_type(const Goal& clause) {
  auto cs = conjuncts(clause);
  if (cs.empty()) return top_type();
  Symbol s = subject_of(cs[0]);
  for (const auto& c : cs)
    if (subject_of(c) != s) throw Error("NotAutomaton", "conjuncts about different subjects");
  return clause_to_type(clause, s);
}

Goal type_to_clause(const IType& t, const Term& subject, int depth) {
  return canonicalize_goal(assert_type(t, subject), depth);
}

bool subtype(const StrictType& a, const StrictType& b) {
  if (a.base != b.base || a.args.size() != b.args.size()) return false;
  for (std::size_t i = 0; i < a.args.size(); ++i)
    if (!subtype(b.args[i], a.args[i])) return false;
  return true;
}

bool subtype(const IType& a, const IType& b) {
  for (const auto& tb : b.parts) {
    bool found = false;
    for (const auto& ta : a.parts)
      if (subtype(*ta, *tb)) {
        found = true;
        break;
      }
    if (!found) return false;
  }
  return true;
}

bool leqa(const Goal& u1, const Goal& u2, const std::vector<Symbol>& vars) {
  for (Symbol x : vars)
    if (!subtype(clause_to_type(u1, x), clause_to_type(u2, x))) return false;
  return true;
}

TypeEnv env_of(const Goal& v) {
  TypeEnv env;
  for (const auto& c : conjuncts(v)) {
    Symbol s = subject_of(c);
    if (!s) throw Error("NotAutomaton", "not an automaton conjunct: " + to_string(c));
    env[s] = inter(env[s], single(conjunct_type(c)));
  }
  return env;
}

Goal formula_of(const TypeEnv& env) {
  std::vector<Goal> out;
  for (const auto& [s, t] : env) out.push_back(type_to_clause(t, mk(s), 0));
  return canonicalize_goal(g_and(std::move(out)), 0);
}

TypeEnv typing_algorithm(const Program& d) {
  SaturateOptions so;
  SolvedForm sf = saturate(d, so);
  std::vector<Goal> all;
  for (const auto& c : sf.clauses) all.push_back(c.clause);
  return env_of(g_and(std::move(all)));
}

std::string to_string(const TypeEnv& env) {
  std::string s;
  for (const auto& [sym, t] : env) s += sym->name + " : " + to_string(t) + "\n";
  return s;
}

}  // namespace homsl
