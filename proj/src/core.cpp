#include "homsl/core.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <functional>
#include <map>
#include <mutex>
#include <set>
#include <tuple>

namespace homsl {

// ---------------------------------------------------------------- sorts

namespace {

std::mutex sort_mutex;
std::map<std::pair<Sort, Sort>, std::unique_ptr<SortNode>>& sort_table() {
  static std::map<std::pair<Sort, Sort>, std::unique_ptr<SortNode>> table;
  return table;
}

}  // namespace

Sort iota() {
  static const SortNode node{SortNode::Kind::Iota};
  return &node;
}

Sort omicron() {
  static const SortNode node{SortNode::Kind::Omicron};
  return &node;
}

Sort arrow(Sort a, Sort b) {
  std::lock_guard<std::mutex> lock(sort_mutex);
  auto& slot = sort_table()[{a, b}];
  if (!slot) slot = std::make_unique<SortNode>(SortNode{SortNode::Kind::Arrow, a, b});
  return slot.get();
}

Sort arrows(const std::vector<Sort>& args, Sort result) {
  Sort s = result;
  for (auto it = args.rbegin(); it != args.rend(); ++it) s = arrow(*it, s);
  return s;
}

std::vector<Sort> arg_sorts(Sort s) {
  std::vector<Sort> out;
  while (s->kind == SortNode::Kind::Arrow) {
    out.push_back(s->left);
    s = s->right;
  }
  return out;
}

Sort tail_sort(Sort s) {
  while (s->kind == SortNode::Kind::Arrow) s = s->right;
  return s;
}

Sort apply_sort(Sort s, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    if (s->kind != SortNode::Kind::Arrow) return nullptr;
    s = s->right;
  }
  return s;
}

int order_of(Sort s) {
  if (s->kind != SortNode::Kind::Arrow) return 0;
  return std::max(order_of(s->left) + 1, order_of(s->right));
}

bool is_constructor_sort(Sort s) {
  for (Sort a : arg_sorts(s))
    if (!is_constructor_sort(a)) return false;
  return tail_sort(s) == iota();
}

bool is_predicate_sort(Sort s) {
  for (Sort a : arg_sorts(s))
    if (!is_constructor_sort(a) && !is_predicate_sort(a)) return false;
  return tail_sort(s) == omicron();
}

int compare_sorts(Sort a, Sort b) {
  if (a == b) return 0;
  if (a->kind != b->kind) return static_cast<int>(a->kind) < static_cast<int>(b->kind) ? -1 : 1;
  if (int c = compare_sorts(a->left, b->left)) return c;
  return compare_sorts(a->right, b->right);
}

std::string to_string(Sort s) {
  switch (s->kind) {
    case SortNode::Kind::Iota: return "i";
    case SortNode::Kind::Omicron: return "o";
    case SortNode::Kind::Arrow: break;
  }
  std::string l = to_string(s->left);
  if (s->left->kind == SortNode::Kind::Arrow) l = "(" + l + ")";
  return l + " -> " + to_string(s->right);
}

std::string sort_code(Sort s) {
  switch (s->kind) {
    case SortNode::Kind::Iota: return "i";
    case SortNode::Kind::Omicron: return "o";
    case SortNode::Kind::Arrow: break;
  }
  return "F" + sort_code(s->left) + sort_code(s->right);
}

// -------------------------------------------------------------- symbols

namespace {

std::mutex symbol_mutex;
std::map<std::tuple<std::string, int, Sort>, std::unique_ptr<SymbolData>>& symbol_table() {
  static std::map<std::tuple<std::string, int, Sort>, std::unique_ptr<SymbolData>> table;
  return table;
}

std::atomic<unsigned long> fresh_counter{0};

}  // namespace

Symbol symbol(const std::string& name, SymKind kind, Sort sort) {
  std::lock_guard<std::mutex> lock(symbol_mutex);
  auto& slot = symbol_table()[{name, static_cast<int>(kind), sort}];
  if (!slot) slot = std::make_unique<SymbolData>(SymbolData{name, kind, sort});
  return slot.get();
}

Symbol fresh_var(Sort s, const std::string& stem) {
  return var(stem + std::to_string(fresh_counter.fetch_add(1)), s);
}

// ---------------------------------------------------------------- terms

Term mk(Symbol head, std::vector<Term> args) {
  std::size_t h = std::hash<const void*>()(head);
  for (const auto& a : args) h = h * 1000003u ^ a->hash;
  return std::make_shared<const TermNode>(TermNode{head, std::move(args), h});
}

Term app(const Term& f, const std::vector<Term>& more) {
  if (more.empty()) return f;
  std::vector<Term> args = f->args;
  args.insert(args.end(), more.begin(), more.end());
  return mk(f->head, std::move(args));
}

std::vector<Term> var_terms(const std::vector<Symbol>& vs) {
  std::vector<Term> out;
  out.reserve(vs.size());
  for (Symbol v : vs) out.push_back(mk(v));
  return out;
}

bool term_equal(const Term& a, const Term& b) {
  if (a == b) return true;
  if (a->hash != b->hash || a->head != b->head || a->args.size() != b->args.size()) return false;
  for (std::size_t i = 0; i < a->args.size(); ++i)
    if (!term_equal(a->args[i], b->args[i])) return false;
  return true;
}

int compare_terms(const Term& a, const Term& b) {
  if (a == b) return 0;
  if (int c = a->head->name.compare(b->head->name)) return c < 0 ? -1 : 1;
  if (a->args.size() != b->args.size()) return a->args.size() < b->args.size() ? -1 : 1;
  for (std::size_t i = 0; i < a->args.size(); ++i)
    if (int c = compare_terms(a->args[i], b->args[i])) return c;
  if (a->head->kind != b->head->kind)
    return static_cast<int>(a->head->kind) < static_cast<int>(b->head->kind) ? -1 : 1;
  return compare_sorts(a->head->sort, b->head->sort);
}

int depth(const Term& t) {
  if (t->args.empty()) return 0;
  int d = 0;
  for (const auto& a : t->args) d = std::max(d, depth(a));
  return d + 1;
}

std::size_t term_size(const Term& t) {
  std::size_t n = 1;
  for (const auto& a : t->args) n += term_size(a);
  return n;
}

bool is_closed(const Term& t) {
  if (t->head->kind == SymKind::Variable) return false;
  for (const auto& a : t->args)
    if (!is_closed(a)) return false;
  return true;
}

bool occurs(Symbol v, const Term& t) {
  if (t->head == v) return true;
  for (const auto& a : t->args)
    if (occurs(v, a)) return true;
  return false;
}

void free_vars(const Term& t, std::vector<Symbol>& out) {
  if (t->head->kind == SymKind::Variable &&
      std::find(out.begin(), out.end(), t->head) == out.end())
    out.push_back(t->head);
  for (const auto& a : t->args) free_vars(a, out);
}

namespace {

Sort sort_of_impl(const std::vector<Symbol>* ctx, const Term& t) {
  if (ctx && t->head->kind == SymKind::Variable &&
      std::find(ctx->begin(), ctx->end(), t->head) == ctx->end())
    throw Error("UnknownSymbol", "unknown variable " + t->head->name);
  Sort s = t->head->sort;
  for (const auto& a : t->args) {
    Sort as = sort_of_impl(ctx, a);
    if (s->kind != SortNode::Kind::Arrow || s->left != as)
      throw Error("UnsortedTerm", "ill-sorted application in " + to_string(t));
    s = s->right;
  }
  return s;
}

}  // namespace

Sort sort_of(const Term& t) { return sort_of_impl(nullptr, t); }
Sort sort_of(const std::vector<Symbol>& ctx, const Term& t) { return sort_of_impl(&ctx, t); }

Term substitute(const Term& t, const Subst& s) {
  if (s.empty()) return t;
  std::vector<Term> args;
  args.reserve(t->args.size());
  bool changed = false;
  for (const auto& a : t->args) {
    args.push_back(substitute(a, s));
    changed = changed || args.back() != a;
  }
  if (t->head->kind == SymKind::Variable) {
    auto it = s.find(t->head);
    if (it != s.end()) return app(it->second, args);
  }
  if (!changed) return t;
  return mk(t->head, std::move(args));
}

std::string to_string(const Term& t) {
  std::string out = t->head->name;
  for (const auto& a : t->args) {
    out += ' ';
    if (a->args.empty()) out += to_string(a);
    else out += "(" + to_string(a) + ")";
  }
  return out;
}

// ---------------------------------------------------------------- goals

Goal g_true() {
  static const Goal t = std::make_shared<const GoalNode>(GoalNode{});
  return t;
}

Goal g_atom(Term a) {
  GoalNode n;
  n.kind = GoalKind::Atom;
  n.atom = std::move(a);
  return std::make_shared<const GoalNode>(std::move(n));
}

Goal g_and(std::vector<Goal> gs) {
  std::vector<Goal> flat;
  for (auto& g : gs) {
    if (g->kind == GoalKind::True) continue;
    if (g->kind == GoalKind::And) flat.insert(flat.end(), g->conj.begin(), g->conj.end());
    else flat.push_back(std::move(g));
  }
  if (flat.empty()) return g_true();
  if (flat.size() == 1) return flat[0];
  GoalNode n;
  n.kind = GoalKind::And;
  n.conj = std::move(flat);
  return std::make_shared<const GoalNode>(std::move(n));
}

Goal g_exists(Symbol v, Goal body) {
  GoalNode n;
  n.kind = GoalKind::Exists;
  n.var = v;
  n.body = std::move(body);
  return std::make_shared<const GoalNode>(std::move(n));
}

Goal g_imp(std::vector<Symbol> binders, Goal body, Goal head) {
  GoalNode n;
  n.kind = GoalKind::Imp;
  n.binders = std::move(binders);
  n.body = std::move(body);
  n.head = std::move(head);
  return std::make_shared<const GoalNode>(std::move(n));
}

std::vector<Goal> conjuncts(const Goal& g) {
  if (g->kind == GoalKind::True) return {};
  if (g->kind == GoalKind::And) return g->conj;
  return {g};
}

namespace {

void free_vars_bound(const Goal& g, std::vector<Symbol>& bound, std::vector<Symbol>& out) {
  auto add_term = [&](const Term& t) {
    std::vector<Symbol> vs;
    free_vars(t, vs);
    for (Symbol v : vs)
      if (std::find(bound.begin(), bound.end(), v) == bound.end() &&
          std::find(out.begin(), out.end(), v) == out.end())
        out.push_back(v);
  };
  switch (g->kind) {
    case GoalKind::True: return;
    case GoalKind::Atom: add_term(g->atom); return;
    case GoalKind::And:
      for (const auto& c : g->conj) free_vars_bound(c, bound, out);
      return;
    case GoalKind::Exists:
      bound.push_back(g->var);
      free_vars_bound(g->body, bound, out);
      bound.pop_back();
      return;
    case GoalKind::Imp:
      bound.insert(bound.end(), g->binders.begin(), g->binders.end());
      free_vars_bound(g->body, bound, out);
      free_vars_bound(g->head, bound, out);
      bound.resize(bound.size() - g->binders.size());
      return;
  }
}

}  // namespace

void free_vars(const Goal& g, std::vector<Symbol>& out) {
  std::vector<Symbol> bound;
  free_vars_bound(g, bound, out);
}

bool has_exists(const Goal& g) {
  switch (g->kind) {
    case GoalKind::Exists: return true;
    case GoalKind::And:
      for (const auto& c : g->conj)
        if (has_exists(c)) return true;
      return false;
    case GoalKind::Imp: return has_exists(g->body) || has_exists(g->head);
    default: return false;
  }
}

namespace {

bool range_mentions(const Subst& s, Symbol v) {
  for (const auto& [k, t] : s)
    if (occurs(v, t)) return true;
  return false;
}

}  // namespace

Goal substitute(const Goal& g, const Subst& s) {
  if (s.empty()) return g;
  switch (g->kind) {
    case GoalKind::True: return g;
    case GoalKind::Atom: {
      Term t = substitute(g->atom, s);
      return t == g->atom ? g : g_atom(t);
    }
    case GoalKind::And: {
      std::vector<Goal> cs;
      for (const auto& c : g->conj) cs.push_back(substitute(c, s));
      GoalNode n;
      n.kind = GoalKind::And;
      n.conj = std::move(cs);
      return std::make_shared<const GoalNode>(std::move(n));
    }
    case GoalKind::Exists: {
      Subst inner = s;
      inner.erase(g->var);
      Symbol v = g->var;
      if (range_mentions(inner, v)) {
        Symbol nv = fresh_var(v->sort, "_b");
        inner[v] = mk(nv);
        v = nv;
      }
      return g_exists(v, substitute(g->body, inner));
    }
    case GoalKind::Imp: {
      Subst inner = s;
      for (Symbol b : g->binders) inner.erase(b);
      std::vector<Symbol> bs = g->binders;
      for (auto& b : bs)
        if (range_mentions(inner, b)) {
          Symbol nb = fresh_var(b->sort, "_b");
          inner[b] = mk(nb);
          b = nb;
        }
      return g_imp(bs, substitute(g->body, inner), substitute(g->head, inner));
    }
  }
  return g;
}

std::string to_string(const Goal& g) {
  switch (g->kind) {
    case GoalKind::True: return "true";
    case GoalKind::Atom: return to_string(g->atom);
    case GoalKind::And: {
      std::string out;
      for (std::size_t i = 0; i < g->conj.size(); ++i) {
        if (i) out += " /\\ ";
        const auto& c = g->conj[i];
        if (c->kind == GoalKind::Exists || c->kind == GoalKind::And) out += "(" + to_string(c) + ")";
        else out += to_string(c);
      }
      return out;
    }
    case GoalKind::Exists:
      return "exists " + g->var->name + ":" + to_string(g->var->sort) + ". " + to_string(g->body);
    case GoalKind::Imp: {
      std::string out = "(forall";
      for (Symbol b : g->binders) out += " " + b->name;
      return out + ". " + to_string(g->body) + " => " + to_string(g->head) + ")";
    }
  }
  return "";
}

namespace {

int kind_rank(GoalKind k) {
  switch (k) {
    case GoalKind::True: return 0;
    case GoalKind::Atom: return 1;
    case GoalKind::Imp: return 2;
    case GoalKind::Exists: return 3;
    case GoalKind::And: return 4;
  }
  return 5;
}

}  // namespace

int compare_goals(const Goal& a, const Goal& b) {
  if (a == b) return 0;
  int ra = kind_rank(a->kind), rb = kind_rank(b->kind);
  if (ra != rb) return ra < rb ? -1 : 1;
  switch (a->kind) {
    case GoalKind::True: return 0;
    case GoalKind::Atom: return compare_terms(a->atom, b->atom);
    case GoalKind::Imp: {
      if (int c = compare_goals(a->head, b->head)) return c;
      if (a->binders.size() != b->binders.size()) return a->binders.size() < b->binders.size() ? -1 : 1;
      for (std::size_t i = 0; i < a->binders.size(); ++i) {
        if (int c = a->binders[i]->name.compare(b->binders[i]->name)) return c < 0 ? -1 : 1;
        if (int c = compare_sorts(a->binders[i]->sort, b->binders[i]->sort)) return c;
      }
      return compare_goals(a->body, b->body);
    }
    case GoalKind::Exists: {
      if (int c = a->var->name.compare(b->var->name)) return c < 0 ? -1 : 1;
      if (int c = compare_sorts(a->var->sort, b->var->sort)) return c;
      return compare_goals(a->body, b->body);
    }
    case GoalKind::And: {
      std::size_t n = std::min(a->conj.size(), b->conj.size());
      for (std::size_t i = 0; i < n; ++i)
        if (int c = compare_goals(a->conj[i], b->conj[i])) return c;
      if (a->conj.size() != b->conj.size()) return a->conj.size() < b->conj.size() ? -1 : 1;
      return 0;
    }
  }
  return 0;
}

bool goal_equal(const Goal& a, const Goal& b) { return compare_goals(a, b) == 0; }

// ------------------------------------------------------ clauses/program

Symbol Program::find(const std::string& name) const {
  for (Symbol s : constructors)
    if (s->name == name) return s;
  for (Symbol s : predicates)
    if (s->name == name) return s;
  return nullptr;
}

bool Program::has_name(const std::string& name) const { return find(name) != nullptr; }

std::string to_string(const Clause& c) {
  std::string head = to_string(c.head);
  if (c.body->kind == GoalKind::True) return head + ".";
  return head + " <= " + to_string(c.body) + ".";
}

std::string nested_name(int depth, std::size_t index) {
  std::string i = std::to_string(index);
  if (depth == 1) return "Z" + i;
  if (depth == 2) return "W" + i;
  return "V" + std::to_string(depth) + "_" + i;
}

Goal canonicalize_goal(const Goal& g, int depth) {
  switch (g->kind) {
    case GoalKind::True:
    case GoalKind::Atom: return g;
    case GoalKind::And: {
      std::vector<Goal> parts;
      for (const auto& c : g->conj) {
        Goal cc = canonicalize_goal(c, depth);
        for (auto& x : conjuncts(cc)) parts.push_back(x);
      }
      std::sort(parts.begin(), parts.end(),
                [](const Goal& a, const Goal& b) { return compare_goals(a, b) < 0; });
      parts.erase(std::unique(parts.begin(), parts.end(), goal_equal), parts.end());
      return g_and(std::move(parts));
    }
    case GoalKind::Exists: {
      Symbol nv = var("E" + std::to_string(depth + 1), g->var->sort);
      Subst s{{g->var, mk(nv)}};
      Goal body = g->var == nv ? g->body : substitute(g->body, s);
      return g_exists(nv, canonicalize_goal(body, depth + 1));
    }
    case GoalKind::Imp: {
      Subst s;
      std::vector<Symbol> bs;
      for (std::size_t i = 0; i < g->binders.size(); ++i) {
        Symbol nb = var(nested_name(depth + 1, i + 1), g->binders[i]->sort);
        bs.push_back(nb);
        if (nb != g->binders[i]) s[g->binders[i]] = mk(nb);
      }
      Goal body = canonicalize_goal(substitute(g->body, s), depth + 1);
      Goal head = canonicalize_goal(substitute(g->head, s), depth + 1);
      return g_imp(std::move(bs), body, head);
    }
  }
  return g;
}

Clause canonicalize_clause(const Clause& c) {
  std::vector<Symbol> order;
  free_vars(c.head, order);
  for (Symbol b : c.binders)
    if (std::find(order.begin(), order.end(), b) == order.end()) order.push_back(b);
  Subst s;
  std::vector<Symbol> bs;
  for (std::size_t i = 0; i < order.size(); ++i) {
    Symbol nb = var("X" + std::to_string(i + 1), order[i]->sort);
    bs.push_back(nb);
    if (nb != order[i]) s[order[i]] = mk(nb);
  }
  Clause out;
  out.binders = std::move(bs);
  out.head = substitute(c.head, s);
  out.body = canonicalize_goal(substitute(c.body, s), 0);
  return out;
}

Program canonicalize_program(const Program& p) {
  Program out = p;
  for (auto& c : out.clauses) c = canonicalize_clause(c);
  if (out.goal) out.goal = canonicalize_goal(*out.goal, 0);
  return out;
}

// ---------------------------------------------------------------- typing

std::string to_string(const Fragment& f) {
  return std::string(f.family == Fragment::Family::MSL ? "MSL" : "HOMSL") + "(" +
         std::to_string(f.order) + ")";
}

namespace {

void check_symbols(const Program& p, const Term& t) {
  Symbol h = t->head;
  if (h->kind == SymKind::Constructor &&
      std::find(p.constructors.begin(), p.constructors.end(), h) == p.constructors.end())
    throw Error("UnknownSymbol", "undeclared constructor " + h->name);
  if (h->kind == SymKind::Predicate &&
      std::find(p.predicates.begin(), p.predicates.end(), h) == p.predicates.end())
    throw Error("UnknownSymbol", "undeclared predicate " + h->name);
  for (const auto& a : t->args) check_symbols(p, a);
}

void check_goal_impl(const Program& p, std::vector<Symbol>& ctx, const Goal& g) {
  switch (g->kind) {
    case GoalKind::True: return;
    case GoalKind::Atom:
      check_symbols(p, g->atom);
      if (sort_of(ctx, g->atom) != omicron())
        throw Error("IllTyped", "atom is not of sort o: " + to_string(g->atom));
      return;
    case GoalKind::And:
      for (const auto& c : g->conj) check_goal_impl(p, ctx, c);
      return;
    case GoalKind::Exists:
      ctx.push_back(g->var);
      check_goal_impl(p, ctx, g->body);
      ctx.pop_back();
      return;
    case GoalKind::Imp:
      ctx.insert(ctx.end(), g->binders.begin(), g->binders.end());
      check_goal_impl(p, ctx, g->body);
      check_goal_impl(p, ctx, g->head);
      ctx.resize(ctx.size() - g->binders.size());
      return;
  }
}

bool distinct_vars(const std::vector<Term>& ts) {
  std::set<Symbol> seen;
  for (const auto& t : ts)
    if (!seen.insert(t->head).second) return false;
  return true;
}

bool all_vars(const std::vector<Term>& ts) {
  for (const auto& t : ts)
    if (t->head->kind != SymKind::Variable || !t->args.empty()) return false;
  return true;
}

void check_head(const Term& h) {
  if (h->head->kind != SymKind::Predicate)
    throw Error("IllTyped", "clause head must be headed by a predicate: " + to_string(h));
  if (all_vars(h->args)) {
    if (!distinct_vars(h->args)) throw Error("NonLinearHead", "repeated variable in head " + to_string(h));
    return;
  }
  if (h->args.size() != 1 || h->args[0]->head->kind != SymKind::Constructor)
    throw Error("NonShallowHead", "head is not shallow: " + to_string(h));
  const auto& inner = h->args[0]->args;
  if (!all_vars(inner)) throw Error("NonShallowHead", "head is not shallow: " + to_string(h));
  if (!distinct_vars(inner)) throw Error("NonLinearHead", "repeated variable in head " + to_string(h));
}

}  // namespace

void check_goal(const Program& p, const std::vector<Symbol>& ctx, const Goal& g) {
  std::vector<Symbol> c = ctx;
  check_goal_impl(p, c, g);
}

Program check_program(const Program& p) {
  std::set<std::string> names;
  for (Symbol c : p.constructors) {
    if (!names.insert(c->name).second) throw Error("DuplicateDeclaration", "duplicate declaration " + c->name);
    if (c->kind != SymKind::Constructor || !is_constructor_sort(c->sort))
      throw Error("IllTyped", "constructor " + c->name + " needs a constructor sort");
  }
  for (Symbol q : p.predicates) {
    if (!names.insert(q->name).second) throw Error("DuplicateDeclaration", "duplicate declaration " + q->name);
    if (q->kind != SymKind::Predicate || !is_predicate_sort(q->sort))
      throw Error("IllTyped", "predicate " + q->name + " needs a predicate sort");
  }
  for (const auto& c : p.clauses) {
    std::set<Symbol> bs(c.binders.begin(), c.binders.end());
    if (bs.size() != c.binders.size()) throw Error("IllTyped", "repeated binder in clause " + to_string(c));
    for (Symbol b : c.binders)
      if (names.count(b->name)) throw Error("IllTyped", "binder shadows a declared symbol: " + b->name);
    check_head(c.head);
    check_symbols(p, c.head);
    if (sort_of(c.binders, c.head) != omicron()) throw Error("IllTyped", "head is not of sort o: " + to_string(c.head));
    std::vector<Symbol> hv;
    free_vars(c.head, hv);
    if (hv.size() != c.binders.size())
      throw Error("IllTyped", "clause binders must all occur in the head: " + to_string(c));
    std::vector<Symbol> bv;
    free_vars(c.body, bv);
    for (Symbol v : bv)
      if (!bs.count(v)) throw Error("IllTyped", "free variable " + v->name + " in clause body");
    check_goal(p, c.binders, c.body);
  }
  if (p.goal) {
    std::vector<Symbol> gv;
    free_vars(*p.goal, gv);
    if (!gv.empty()) throw Error("FreeVariableInGoal", "free variable " + gv[0]->name + " in goal");
    check_goal(p, {}, *p.goal);
  }
  return p;
}

Fragment classify_fragment(const Program& p) {
  Fragment f{Fragment::Family::MSL, 0};
  for (Symbol q : p.predicates)
    if (q->sort != arrow(iota(), omicron())) f.family = Fragment::Family::HOMSL;
  for (Symbol c : p.constructors) {
    auto as = arg_sorts(c->sort);
    if (as.empty()) continue;
    int m = 0;
    for (Sort a : as) m = std::max(m, order_of(a));
    f.order = std::max(f.order, m + 1);
  }
  return f;
}

bool is_identifier_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '#' || c == '\'';
}

std::string ident_safe(const std::string& name) {
  std::string out;
  for (char c : name) {
    if (c == '"') continue;
    out += is_identifier_char(c) ? c : '_';
  }
  if (out.empty()) out = "_";
  return out;
}

}  // namespace homsl
