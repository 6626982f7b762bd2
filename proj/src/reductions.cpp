#include "homsl/reductions.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <set>

namespace homsl {

namespace {

std::set<std::string> taken_names(const Program& p) {
  std::set<std::string> out;
  for (Symbol s : p.constructors) out.insert(s->name);
  for (Symbol s : p.predicates) out.insert(s->name);
  return out;
}

std::string unique_name(std::set<std::string>& taken, const std::string& base) {
  std::string n = base;
  for (int i = 1; taken.count(n); ++i) n = base + std::to_string(i);
  taken.insert(n);
  return n;
}

template <class F>
void for_each_goal_var(const Goal& g, F&& f) {
  switch (g->kind) {
    case GoalKind::And:
      for (const auto& c : g->conj) for_each_goal_var(c, f);
      break;
    case GoalKind::Exists:
      f(g->var);
      for_each_goal_var(g->body, f);
      break;
    case GoalKind::Imp:
      for (Symbol b : g->binders) f(b);
      for_each_goal_var(g->body, f);
      for_each_goal_var(g->head, f);
      break;
    default: break;
  }
}

void add_sort(std::vector<Sort>& out, Sort s) {
  if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
}

// Predicate sorts and constructor sorts mentioned anywhere in p.
void occurring_sorts(const Program& p, std::vector<Sort>& preds, std::vector<Sort>& cons) {
  std::function<void(Sort)> visit = [&](Sort s) {
    if (is_predicate_sort(s)) {
      if (std::find(preds.begin(), preds.end(), s) != preds.end()) return;
      preds.push_back(s);
    } else if (is_constructor_sort(s)) {
      if (std::find(cons.begin(), cons.end(), s) != cons.end()) return;
      cons.push_back(s);
    } else {
      return;
    }
    for (Sort a : arg_sorts(s)) visit(a);
  };
  for (Symbol q : p.predicates) visit(q->sort);
  for (Symbol c : p.constructors) visit(c->sort);
  auto visit_var = [&](Symbol v) { visit(v->sort); };
  for (const auto& c : p.clauses) {
    for (Symbol b : c.binders) visit(b->sort);
    for_each_goal_var(c.body, visit_var);
  }
  if (p.goal) for_each_goal_var(*p.goal, visit_var);
}

std::vector<Sort> inhabited_sorts(const Program& p) {
  std::vector<Sort> inh;
  bool changed = true;
  while (changed) {
    changed = false;
    for (Symbol c : p.constructors) {
      auto as = arg_sorts(c->sort);
      Sort s = c->sort;
      for (std::size_t k = 0; k <= as.size(); ++k) {
        if (std::find(inh.begin(), inh.end(), s) == inh.end()) {
          inh.push_back(s);
          changed = true;
        }
        if (k == as.size() || std::find(inh.begin(), inh.end(), as[k]) == inh.end()) break;
        s = s->right;
      }
    }
  }
  return inh;
}

}  // namespace

std::string universal_name(Sort rho) { return "U#" + sort_code(rho); }

Symbol find_universal(const Program& p, Sort rho) {
  for (Symbol q : p.predicates)
    if (q->sort == rho && q->name.rfind(universal_name(rho), 0) == 0) return q;
  return nullptr;
}

Program ensure_adequate(const Program& p) {
  Program out = p;
  std::set<std::string> taken = taken_names(p);
  std::vector<Sort> preds, cons;
  occurring_sorts(p, preds, cons);
  for (Sort rho : preds) {
    if (find_universal(out, rho)) continue;
    Symbol u = pred(unique_name(taken, universal_name(rho)), rho);
    out.predicates.push_back(u);
    Clause ax;
    auto as = arg_sorts(rho);
    for (std::size_t i = 0; i < as.size(); ++i) ax.binders.push_back(var("Y" + std::to_string(i + 1), as[i]));
    ax.body = g_true();
    ax.head = mk(u, var_terms(ax.binders));
    out.clauses.push_back(ax);
  }
  std::sort(cons.begin(), cons.end(), [](Sort a, Sort b) { return compare_sorts(a, b) < 0; });
  for (Sort g : cons) {
    auto inh = inhabited_sorts(out);
    if (std::find(inh.begin(), inh.end(), g) != inh.end()) continue;
    out.constructors.push_back(con(unique_name(taken, "inhab_" + sort_code(g)), g));
  }
  return out;
}

Program eliminate_pred_existentials(const Program& p) {
  bool any = false;
  std::function<bool(const Goal&)> has_pred_ex = [&](const Goal& g) -> bool {
    switch (g->kind) {
      case GoalKind::Exists: return is_predicate_sort(g->var->sort) || has_pred_ex(g->body);
      case GoalKind::And:
        for (const auto& c : g->conj)
          if (has_pred_ex(c)) return true;
        return false;
      default: return false;
    }
  };
  for (const auto& c : p.clauses) any = any || has_pred_ex(c.body);
  if (p.goal) any = any || has_pred_ex(*p.goal);
  if (!any) return p;
  Program out = ensure_adequate(p);
  std::function<Goal(const Goal&)> elim = [&](const Goal& g) -> Goal {
    switch (g->kind) {
      case GoalKind::And: {
        std::vector<Goal> cs;
        for (const auto& c : g->conj) cs.push_back(elim(c));
        return g_and(std::move(cs));
      }
      case GoalKind::Exists: {
        Goal body = elim(g->body);
        if (!is_predicate_sort(g->var->sort)) return g_exists(g->var, body);
        Symbol u = find_universal(out, g->var->sort);
        return substitute(body, Subst{{g->var, mk(u)}});
      }
      default: return g;
    }
  };
  for (auto& c : out.clauses) c.body = elim(c.body);
  if (out.goal) out.goal = elim(*out.goal);
  return out;
}

bool is_msl_normal(const Program& p) {
  Sort io = arrow(iota(), omicron());
  for (Symbol q : p.predicates)
    if (q->sort != io) return false;
  for (const auto& c : p.clauses)
    if (c.head->args.size() != 1 || c.head->args[0]->head->kind != SymKind::Constructor) return false;
  return true;
}

bool needs_reduction(const Program& p) {
  if (!is_msl_normal(p)) return true;
  for (const auto& c : p.clauses)
    if (has_exists(c.body)) return true;
  return p.goal && has_exists(*p.goal);
}

namespace {

Sort tr_sort(Sort s) {
  switch (s->kind) {
    case SortNode::Kind::Iota: return s;
    case SortNode::Kind::Omicron: return iota();
    case SortNode::Kind::Arrow: break;
  }
  return arrow(tr_sort(s->left), tr_sort(s->right));
}

Symbol tr_var(Symbol v) {
  Sort s = tr_sort(v->sort);
  return s == v->sort ? v : var(v->name, s);
}

Subst retype_subst(const std::vector<Symbol>& vs) {
  Subst s;
  for (Symbol v : vs) {
    Symbol nv = tr_var(v);
    if (nv != v) s[v] = mk(nv);
  }
  return s;
}

}  // namespace

Term translate_term(const HoMap& m, const Term& t) {
  if (m.identity) return t;
  std::vector<Term> args;
  for (const auto& a : t->args) args.push_back(translate_term(m, a));
  Symbol h = t->head;
  if (h->kind == SymKind::Predicate) {
    auto it = m.pred_to_con.find(h);
    if (it != m.pred_to_con.end()) h = it->second;
  } else if (h->kind == SymKind::Variable) {
    h = tr_var(h);
  }
  return mk(h, std::move(args));
}

Goal translate_goal(const HoMap& m, const Goal& g) {
  if (m.identity) return g;
  switch (g->kind) {
    case GoalKind::True: return g;
    case GoalKind::Atom: return g_atom(mk(m.truth, {translate_term(m, g->atom)}));
    case GoalKind::And: {
      std::vector<Goal> cs;
      for (const auto& c : g->conj) cs.push_back(translate_goal(m, c));
      return g_and(std::move(cs));
    }
    case GoalKind::Exists: {
      Symbol nv = tr_var(g->var);
      Goal body = g->body;
      if (nv != g->var) body = substitute(body, Subst{{g->var, mk(nv)}});
      return g_exists(nv, translate_goal(m, body));
    }
    case GoalKind::Imp:
      return g_imp(g->binders, translate_goal(m, g->body), translate_goal(m, g->head));
  }
  return g;
}

Program eliminate_ho_predicates(const Program& p, HoMap* map) {
  HoMap m;
  if (is_msl_normal(p)) {
    if (map) *map = m;
    return p;
  }
  m.identity = false;
  std::set<std::string> taken = taken_names(p);
  Sort io = arrow(iota(), omicron());
  m.truth = pred(unique_name(taken, "t#"), io);
  Program out;
  out.constructors = p.constructors;
  out.predicates.push_back(m.truth);
  for (Symbol q : p.predicates) {
    std::string base;
    for (char c : ident_safe(q->name)) base += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    Symbol c = con(unique_name(taken, base + "#"), tr_sort(q->sort));
    m.pred_to_con[q] = c;
    m.con_to_pred[c] = q;
    out.constructors.push_back(c);
    if (q->sort == io) out.predicates.push_back(q);
  }
  std::vector<Symbol> reflected;
  for (const auto& c : p.clauses) {
    Subst rs = retype_subst(c.binders);
    Goal body = translate_goal(m, substitute(c.body, rs));
    Symbol P = c.head->head;
    bool var_head = true;
    for (const auto& a : c.head->args) var_head = var_head && a->head->kind == SymKind::Variable && a->args.empty();
    Clause nc;
    nc.body = body;
    if (var_head) {
      for (Symbol b : c.binders) nc.binders.push_back(tr_var(b));
      std::vector<Term> args;
      for (const auto& a : c.head->args) args.push_back(mk(tr_var(a->head)));
      nc.head = mk(m.truth, {mk(m.pred_to_con.at(P), std::move(args))});
      out.clauses.push_back(nc);
    } else {
      nc.binders = c.binders;
      nc.head = c.head;
      out.clauses.push_back(nc);
      if (std::find(reflected.begin(), reflected.end(), P) == reflected.end()) reflected.push_back(P);
    }
  }
  for (Symbol q : p.predicates) {
    if (std::find(reflected.begin(), reflected.end(), q) == reflected.end()) continue;
    Sort arg = arg_sorts(q->sort).at(0);
    Symbol z = var("Z", arg);
    Clause r;
    r.binders = {z};
    r.body = g_atom(mk(q, {mk(z)}));
    r.head = mk(m.truth, {mk(m.pred_to_con.at(q), {mk(z)})});
    out.clauses.push_back(r);
  }
  if (p.goal) out.goal = translate_goal(m, *p.goal);
  if (map) *map = m;
  return out;
}

Program eliminate_existentials(const Program& p) {
  bool any = false;
  for (const auto& c : p.clauses) any = any || has_exists(c.body);
  if (p.goal) any = any || has_exists(*p.goal);
  if (!any) return p;

  std::vector<Sort> es;
  std::function<void(const Goal&)> collect = [&](const Goal& g) {
    if (g->kind == GoalKind::Exists) {
      add_sort(es, g->var->sort);
      collect(g->body);
    } else if (g->kind == GoalKind::And) {
      for (const auto& c : g->conj) collect(c);
    }
  };
  for (const auto& c : p.clauses) collect(c.body);
  if (p.goal) collect(*p.goal);
  for (std::size_t k = 0; k < es.size(); ++k) {
    for (Symbol f : p.constructors) {
      auto as = arg_sorts(f->sort);
      for (std::size_t n = 0; n <= as.size(); ++n)
        if (apply_sort(f->sort, n) == es[k])
          for (std::size_t i = 0; i < n; ++i) add_sort(es, as[i]);
    }
  }

  Program out = p;
  std::set<std::string> taken = taken_names(p);
  std::vector<Symbol> ex;
  for (Sort g : es) {
    Symbol e = pred(unique_name(taken, "Ex#" + sort_code(g)), arrow(arrow(g, omicron()), omicron()));
    ex.push_back(e);
    out.predicates.push_back(e);
  }
  auto ex_of = [&](Sort g) { return ex[std::find(es.begin(), es.end(), g) - es.begin()]; };

  std::vector<Clause> encoding;
  for (Sort g : es) {
    Sort vs = arrow(g, omicron());
    Symbol v = var("V", vs);
    for (Symbol f : p.constructors) {
      auto as = arg_sorts(f->sort);
      for (std::size_t n = 0; n <= as.size(); ++n) {
        if (apply_sort(f->sort, n) != g) continue;
        std::vector<Symbol> comp;
        for (std::size_t i = 0; i <= n; ++i) {
          std::vector<Sort> cs{vs};
          cs.insert(cs.end(), as.begin(), as.begin() + static_cast<long>(i));
          std::string name = "Comp#" + ident_safe(f->name) + "#" + std::to_string(i) + "#" + std::to_string(n);
          comp.push_back(pred(unique_name(taken, name), arrows(cs, omicron())));
          out.predicates.push_back(comp.back());
        }
        std::vector<Symbol> xs;
        for (std::size_t i = 0; i < n; ++i) xs.push_back(var("X" + std::to_string(i + 1), as[i]));
        Clause start;
        start.binders = {v};
        start.body = g_atom(mk(comp[0], {mk(v)}));
        start.head = mk(ex_of(g), {mk(v)});
        encoding.push_back(start);
        Clause done;
        done.binders = {v};
        done.binders.insert(done.binders.end(), xs.begin(), xs.end());
        done.body = g_atom(mk(v, {mk(f, var_terms(xs))}));
        done.head = mk(comp[n], var_terms(done.binders));
        encoding.push_back(done);
        for (std::size_t i = 0; i < n; ++i) {
          Clause delay;
          delay.binders = {v};
          delay.binders.insert(delay.binders.end(), xs.begin(), xs.begin() + static_cast<long>(i));
          Term partial = mk(comp[i + 1], var_terms(delay.binders));
          delay.body = g_atom(mk(ex_of(as[i]), {partial}));
          delay.head = mk(comp[i], var_terms(delay.binders));
          encoding.push_back(delay);
        }
      }
    }
  }

  int lam_count = 0;
  std::vector<Clause> lambdas;
  std::function<Goal(const Goal&)> exf = [&](const Goal& g) -> Goal {
    switch (g->kind) {
      case GoalKind::And: {
        std::vector<Goal> cs;
        for (const auto& c : g->conj) cs.push_back(exf(c));
        return g_and(std::move(cs));
      }
      case GoalKind::Exists: {
        std::vector<Symbol> fv;
        free_vars(g, fv);
        Goal body = exf(g->body);
        std::vector<Sort> ls;
        for (Symbol x : fv) ls.push_back(x->sort);
        ls.push_back(g->var->sort);
        Symbol lam = pred(unique_name(taken, "Lam#" + std::to_string(++lam_count)), arrows(ls, omicron()));
        out.predicates.push_back(lam);
        Clause def;
        def.binders = fv;
        def.binders.push_back(g->var);
        def.body = body;
        def.head = mk(lam, var_terms(def.binders));
        lambdas.push_back(def);
        return g_atom(mk(ex_of(g->var->sort), {mk(lam, var_terms(fv))}));
      }
      default: return g;
    }
  };
  for (auto& c : out.clauses) c.body = exf(c.body);
  if (out.goal) out.goal = exf(*out.goal);
  out.clauses.insert(out.clauses.end(), encoding.begin(), encoding.end());
  out.clauses.insert(out.clauses.end(), lambdas.begin(), lambdas.end());
  return out;
}

Reduction reduce_with_maps(const Program& p) {
  Reduction r;
  r.adequate = p;
  r.result = p;
  if (!needs_reduction(p)) return r;
  r.reduced = true;
  r.adequate = ensure_adequate(p);
  Program a = eliminate_pred_existentials(r.adequate);
  HoMap m1, m2;
  Program b = eliminate_ho_predicates(a, &m1);
  Program c = eliminate_existentials(b);
  r.result = eliminate_ho_predicates(c, &m2);
  r.maps = {m1, m2};
  return r;
}

Program reduce_all(const Program& p) { return reduce_with_maps(p).result; }

Goal translate_goal(const Reduction& r, const Goal& g) {
  Goal out = g;
  for (const auto& m : r.maps) out = translate_goal(m, out);
  return out;
}

}  // namespace homsl
