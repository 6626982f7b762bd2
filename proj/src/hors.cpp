#include "homsl/hors.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>

#include "homsl/automaton.hpp"
#include "homsl/reductions.hpp"
#include "homsl/surface.hpp"

namespace homsl {

namespace {

[[noreturn]] void ill(const std::string& msg) { throw Error("IllTypedHors", msg); }

// ------------------------------------------------------ raw terms

struct Raw {
  std::string name;
  std::vector<Raw> args;
};

struct Lexer {
  std::string src;
  std::size_t pos = 0;

  void skip() {
    while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
  }
  bool at_end() {
    skip();
    return pos >= src.size();
  }
  bool eat(char c) {
    skip();
    if (pos < src.size() && src[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  bool peek_ident() {
    skip();
    return pos < src.size() && is_identifier_char(src[pos]);
  }
  std::string ident() {
    skip();
    std::size_t b = pos;
    while (pos < src.size() && is_identifier_char(src[pos])) ++pos;
    if (b == pos) throw Error("ParseError", "expected a name in '" + src + "'");
    return src.substr(b, pos - b);
  }
  std::string rest() {
    skip();
    return src.substr(pos);
  }
};

Raw raw_atom(Lexer& lx) {
  if (lx.eat('(')) {
    Raw r;
    Raw head = raw_atom(lx);
    r = head;
    while (!lx.eat(')')) {
      if (lx.at_end()) throw Error("ParseError", "unbalanced parentheses in '" + lx.src + "'");
      r.args.push_back(raw_atom(lx));
    }
    return r;
  }
  return Raw{lx.ident(), {}};
}

Raw raw_term(Lexer& lx) {
  Raw r = raw_atom(lx);
  while (!lx.at_end()) r.args.push_back(raw_atom(lx));
  return r;
}

// ------------------------------------------------- sort inference

struct SortUF {
  enum Kind { Var, Base, Arr };
  struct Node {
    Kind kind;
    int l = -1, r = -1, parent;
  };
  std::vector<Node> nodes;

  int make(Kind k, int l = -1, int r = -1) {
    nodes.push_back({k, l, r, static_cast<int>(nodes.size())});
    return static_cast<int>(nodes.size()) - 1;
  }
  int fresh() { return make(Var); }
  int from(Sort s) {
    if (s == iota()) return make(Base);
    if (s->kind != SortNode::Kind::Arrow) ill("sort " + to_string(s) + " is not allowed in a scheme");
    return make(Arr, from(s->left), from(s->right));
  }
  int find(int x) {
    while (nodes[x].parent != x) x = nodes[x].parent = nodes[nodes[x].parent].parent;
    return x;
  }
  bool occurs(int v, int x) {
    x = find(x);
    if (x == v) return true;
    return nodes[x].kind == Arr && (occurs(v, nodes[x].l) || occurs(v, nodes[x].r));
  }
  void unify(int a, int b, const std::string& where) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (nodes[a].kind == Var) {
      if (occurs(a, b)) ill("infinite sort in " + where);
      nodes[a].parent = b;
      return;
    }
    if (nodes[b].kind == Var) return unify(b, a, where);
    if (nodes[a].kind != nodes[b].kind) ill("sort mismatch in " + where);
    if (nodes[a].kind == Arr) {
      unify(nodes[a].l, nodes[b].l, where);
      unify(nodes[a].r, nodes[b].r, where);
    }
  }
  // Unconstrained sorts default to i.
  Sort resolve(int x) {
    x = find(x);
    if (nodes[x].kind == Arr) return arrow(resolve(nodes[x].l), resolve(nodes[x].r));
    return iota();
  }
};

struct RawRule {
  std::string head;
  std::vector<std::string> params;
  Raw body;
  std::string text;
};

std::vector<std::string> statements(const std::string& text) {
  std::string clean;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    auto c = line.find('%');
    if (c != std::string::npos) line.resize(c);
    clean += line + "\n";
  }
  std::vector<std::string> out;
  std::string cur;
  for (char ch : clean) {
    if (ch == '.') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (cur.find_first_not_of(" \t\r\n") != std::string::npos)
    throw Error("ParseError", "missing '.' after: " + cur);
  return out;
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string params_string(const Hors::Rule& r) {
  std::string s;
  for (const auto& p : r.params) s += " " + to_string(p);
  return s;
}

}  // namespace

Hors parse_hors(const std::string& text) {
  Hors h;
  std::map<std::string, Symbol> states, terminals;
  std::vector<std::pair<std::string, std::string>> term_decls;  // name, type text
  std::vector<RawRule> raw_rules;
  std::string start;

  for (const auto& st : statements(text)) {
    std::string s = trim(st);
    if (s.empty()) continue;
    Lexer lx{s};
    std::string kw = lx.ident();
    if (kw == "states") {
      while (!lx.at_end()) {
        std::string n = lx.ident();
        Symbol q = pred(n, arrow(iota(), omicron()));
        if (!states.emplace(n, q).second) throw Error("DuplicateDeclaration", "duplicate state " + n);
        h.states.push_back(q);
      }
    } else if (kw == "terminal") {
      std::string n = lx.ident();
      if (!lx.eat(':')) throw Error("ParseError", "expected ':' in terminal " + n);
      std::string rest = lx.rest();
      auto eq = rest.find('=');
      if (eq == std::string::npos) throw Error("ParseError", "expected '= TYPE' in terminal " + n);
      Symbol c = con(n, parse_sort(trim(rest.substr(0, eq))));
      if (!terminals.emplace(n, c).second) throw Error("DuplicateDeclaration", "duplicate terminal " + n);
      term_decls.emplace_back(n, trim(rest.substr(eq + 1)));
    } else if (kw == "rule") {
      RawRule r;
      r.text = s;
      r.head = lx.ident();
      while (!lx.eat('=')) r.params.push_back(lx.ident());
      r.body = raw_term(lx);
      raw_rules.push_back(std::move(r));
    } else if (kw == "start") {
      start = lx.ident();
    } else if (kw == "preorder") {
      throw Error("Unsupported",
                  "non-trivial preorders on base types are not supported; simulate q1 <= q2 with a fresh "
                  "base type assigned wherever q1 is");
    } else {
      throw Error("ParseError", "unknown declaration '" + kw + "'");
    }
  }
  if (h.states.empty()) throw Error("ParseError", "missing 'states' declaration");
  if (start.empty()) throw Error("ParseError", "missing 'start' declaration");

  auto base = [&](const std::string& n) -> Symbol {
    auto it = states.find(n);
    return it == states.end() ? nullptr : it->second;
  };
  for (const auto& [n, ty] : term_decls) {
    Symbol c = terminals.at(n);
    IType t = parse_type(ty, base);
    check_type(t, c->sort);
    h.terminals.push_back({c, t});
  }

  // Sorts of nonterminals.
  SortUF uf;
  std::map<std::string, int> nt;
  std::vector<std::string> nt_order;
  auto nonterminal = [&](const std::string& n) {
    auto it = nt.find(n);
    if (it != nt.end()) return it->second;
    if (states.count(n)) ill("state " + n + " used as a symbol");
    nt_order.push_back(n);
    return nt[n] = uf.fresh();
  };
  for (const auto& r : raw_rules) {
    if (terminals.count(r.head)) ill("rule for terminal " + r.head);
    nonterminal(r.head);
  }
  std::vector<std::map<std::string, int>> param_nodes;
  for (const auto& r : raw_rules) {
    std::map<std::string, int> ps;
    std::vector<int> pnodes;
    for (const auto& p : r.params) {
      int n;
      auto t = terminals.find(p);
      if (t != terminals.end()) {
        if (t->second->sort != iota()) ill("pattern " + p + " is not a constant of sort i");
        n = uf.make(SortUF::Base);
      } else {
        if (ps.count(p)) ill("repeated parameter " + p + " in: " + r.text);
        n = ps[p] = uf.fresh();
      }
      pnodes.push_back(n);
    }
    std::function<int(const Raw&)> infer = [&](const Raw& t) -> int {
      int hn;
      auto pi = ps.find(t.name);
      if (pi != ps.end()) hn = pi->second;
      else if (auto ti = terminals.find(t.name); ti != terminals.end()) hn = uf.from(ti->second->sort);
      else hn = nonterminal(t.name);
      for (const auto& a : t.args) {
        int an = infer(a);
        int res = uf.fresh();
        uf.unify(hn, uf.make(SortUF::Arr, an, res), r.text);
        hn = res;
      }
      return hn;
    };
    uf.unify(infer(r.body), uf.make(SortUF::Base), r.text);
    int fs = uf.make(SortUF::Base);
    for (auto it = pnodes.rbegin(); it != pnodes.rend(); ++it) fs = uf.make(SortUF::Arr, *it, fs);
    uf.unify(nt.at(r.head), fs, r.text);
    param_nodes.push_back(std::move(ps));
  }
  if (!nt.count(start)) ill("start symbol " + start + " has no rules");
  uf.unify(nt.at(start), uf.make(SortUF::Base), "start symbol");

  std::map<std::string, Symbol> nts;
  for (const auto& n : nt_order) {
    Symbol f = con(n, uf.resolve(nt.at(n)));
    nts[n] = f;
    h.nonterminals.push_back(f);
  }
  h.start = nts.at(start);
  for (std::size_t i = 0; i < raw_rules.size(); ++i) {
    const auto& r = raw_rules[i];
    std::map<std::string, Symbol> vars;
    for (const auto& [n, node] : param_nodes[i]) vars[n] = var(n, uf.resolve(node));
    std::function<Term(const Raw&)> build = [&](const Raw& t) -> Term {
      Symbol s;
      if (auto v = vars.find(t.name); v != vars.end()) s = v->second;
      else if (auto c = terminals.find(t.name); c != terminals.end()) s = c->second;
      else s = nts.at(t.name);
      std::vector<Term> as;
      for (const auto& a : t.args) as.push_back(build(a));
      return mk(s, std::move(as));
    };
    Hors::Rule rule;
    rule.head = nts.at(r.head);
    for (const auto& p : r.params) rule.params.push_back(vars.count(p) ? mk(vars.at(p)) : mk(terminals.at(p)));
    rule.body = build(r.body);
    h.rules.push_back(std::move(rule));
  }
  return h;
}

std::string print_hors(const Hors& h) {
  std::string s = "states";
  for (Symbol q : h.states) s += " " + q->name;
  s += ".\n";
  for (const auto& t : h.terminals)
    s += "terminal " + t.sym->name + " : " + to_string(t.sym->sort) + " = " + to_string(t.type) + ".\n";
  for (const auto& r : h.rules) s += "rule " + r.head->name + params_string(r) + " = " + to_string(r.body) + ".\n";
  s += "start " + h.start->name + ".\n";
  return s;
}

Program import_hors(const Hors& h) {
  Program p;
  std::map<Symbol, const IType*> ty;
  for (const auto& t : h.terminals) {
    p.constructors.push_back(t.sym);
    ty[t.sym] = &t.type;
  }
  for (Symbol f : h.nonterminals) p.constructors.push_back(f);
  p.predicates = h.states;

  for (const auto& r : h.rules) {
    std::vector<Symbol> ys;
    std::vector<Goal> guards;
    std::vector<Term> head_args;
    for (const auto& prm : r.params) {
      if (prm->head->kind == SymKind::Variable) {
        ys.push_back(prm->head);
      } else {
        // Pattern: the argument must carry the terminal's type.
        ys.push_back(fresh_var(iota(), "_p"));
        guards.push_back(type_to_clause(*ty.at(prm->head), mk(ys.back()), 0));
      }
      head_args.push_back(mk(ys.back()));
    }
    Term lhs = mk(r.head, head_args);
    for (Symbol q : h.states) {
      std::vector<Goal> body = guards;
      body.push_back(g_atom(mk(q, {r.body})));
      p.clauses.push_back(canonicalize_clause({ys, g_and(std::move(body)), mk(q, {lhs})}));
    }
  }
  for (const auto& t : h.terminals)
    for (const auto& c : conjuncts(type_to_clause(t.type, mk(t.sym), 0)))
      p.clauses.push_back(canonicalize_clause(goal_as_clause(c)));
  if (h.start) p.goal = g_atom(mk(h.states.at(0), {mk(h.start)}));
  return check_program(p);
}

namespace {

Sort lift(Sort s) {
  if (s == iota()) return arrow(iota(), iota());
  return arrow(lift(s->left), lift(s->right));
}

struct Emitter {
  const Program& p;
  std::set<std::string> used;
  Symbol truth, conj;
  std::map<Symbol, Symbol> pred_con;
  std::map<Symbol, std::string> names;

  std::string unique(std::string n) {
    while (used.count(n)) n += "'";
    used.insert(n);
    return n;
  }
  Term term(const Term& t) {
    Symbol h = t->head;
    Symbol nh = h->kind == SymKind::Variable ? var(h->name, lift(h->sort)) : con(names.at(h), lift(h->sort));
    std::vector<Term> as;
    for (const auto& a : t->args) as.push_back(term(a));
    return mk(nh, std::move(as));
  }
  Term goal(const Goal& g) {
    switch (g->kind) {
      case GoalKind::True: return mk(truth);
      case GoalKind::Atom: return app(term(g->atom->args.at(0)), mk(pred_con.at(g->atom->head)));
      case GoalKind::And: {
        Term acc = goal(g->conj.back());
        for (std::size_t i = g->conj.size() - 1; i-- > 0;) acc = mk(conj, {goal(g->conj[i]), acc});
        return acc;
      }
      case GoalKind::Exists: throw Error("NotExistentialFree", "existential in " + to_string(g));
      case GoalKind::Imp: throw Error("Unsupported", "implication in a goal: " + to_string(g));
    }
    return nullptr;
  }
};

}  // namespace

Hors emit_hors(const Program& in) {
  if (!in.goal) throw Error("MissingGoal", "program has no goal");
  if (has_exists(*in.goal)) throw Error("NotExistentialFree", "existential in the goal");
  for (const auto& c : in.clauses)
    if (has_exists(c.body)) throw Error("NotExistentialFree", "existential in clause " + to_string(c));
  if (!is_msl_normal(in)) throw Error("NotReduced", "program is not in MSL normal form");
  std::vector<Symbol> gv;
  free_vars(*in.goal, gv);
  if (!gv.empty()) throw Error("NotExistentialFree", "goal has free variable " + gv[0]->name);

  Emitter e{in, {}, nullptr, nullptr, {}, {}};
  for (Symbol c : in.constructors) e.names[c] = e.unique(ident_safe(c->name));
  for (Symbol q : in.predicates) e.names[q] = e.unique(ident_safe(q->name));

  Hors h;
  e.truth = con(e.unique("true"), iota());
  Symbol q_true = pred(e.unique("q_true"), arrow(iota(), omicron()));
  h.states.push_back(q_true);
  h.terminals.push_back({e.truth, single(strict_type({}, q_true))});
  for (Symbol q : in.predicates) {
    Symbol pc = con(e.names.at(q), iota());
    Symbol qs = pred(e.unique("q_" + e.names.at(q)), arrow(iota(), omicron()));
    e.pred_con[q] = pc;
    h.states.push_back(qs);
    h.terminals.push_back({pc, single(strict_type({}, qs))});
  }
  e.conj = con(e.unique("and"), arrows({iota(), iota()}, iota()));
  Symbol start = con(e.unique("S"), iota());
  for (Symbol c : in.constructors) h.nonterminals.push_back(con(e.names.at(c), lift(c->sort)));
  h.nonterminals.push_back(e.conj);
  h.nonterminals.push_back(start);
  h.start = start;

  for (const auto& c0 : in.clauses) {
    Clause c = canonicalize_clause(c0);
    const Term& subj = c.head->args.at(0);
    Hors::Rule r;
    r.head = con(e.names.at(subj->head), lift(subj->head->sort));
    for (const auto& a : subj->args) r.params.push_back(e.term(a));
    r.params.push_back(mk(e.pred_con.at(c.head->head)));
    r.body = e.goal(c.body);
    h.rules.push_back(std::move(r));
  }
  h.rules.push_back({e.conj, {mk(e.truth), mk(e.truth)}, mk(e.truth)});
  h.rules.push_back({start, {}, e.goal(*in.goal)});
  return h;
}

}  // namespace homsl
