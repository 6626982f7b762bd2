#include "homsl/rewrite.hpp"

#include <algorithm>
#include <functional>

#include "homsl/automaton.hpp"

namespace homsl {

std::string rule_name(Rule r) {
  switch (r) {
    case Rule::Refl: return "Refl";
    case Rule::Step: return "Step";
    case Rule::Assm: return "Assm";
    case Rule::AndL: return "AndL";
    case Rule::AndR: return "AndR";
    case Rule::Imp: return "Imp";
    case Rule::Scope: return "Scope";
    case Rule::ImpAnd: return "ImpAnd";
  }
  return "?";
}

namespace {

using Rebuild = std::function<Goal(const Goal&)>;

struct Walker {
  const std::vector<Symbol>& ybar;
  std::vector<RewriteStep>& out;
  std::vector<std::string> path;

  void emit(Rule r, int idx, const Goal& side, const Goal& local, const Rebuild& rebuild) {
    out.push_back(RewriteStep{r, idx, side, path, rebuild(local)});
  }

  bool in_ybar(Symbol s) const { return std::find(ybar.begin(), ybar.end(), s) != ybar.end(); }

  void atom(const std::vector<Goal>& V, const Goal& g, const Rebuild& rebuild) {
    const Term& t = g->atom;
    if (t->args.size() != 1) return;
    Symbol P = t->head;
    const Term& arg = t->args[0];
    Symbol h = arg->head;
    const auto& ss = arg->args;
    for (std::size_t j = 0; j < V.size(); ++j) {
      const Goal& c = V[j];
      int idx = static_cast<int>(j);
      if (c->kind == GoalKind::Atom) {
        if (term_equal(c->atom, t))
          emit(h->kind == SymKind::Variable ? Rule::Refl : Rule::Step, idx, c, g_true(), rebuild);
        continue;
      }
      if (c->kind != GoalKind::Imp) continue;
      const Term& ch = c->head->atom;
      if (ch->head != P || ch->args.size() != 1) continue;
      const Term& csub = ch->args[0];
      const auto& bs = c->binders;
      if (csub->head == h && bs.size() == ss.size()) {
        Subst s;
        for (std::size_t i = 0; i < bs.size(); ++i) s[bs[i]] = ss[i];
        emit(Rule::Step, idx, c, substitute(c->body, s), rebuild);
      }
      if (h->kind == SymKind::Variable && in_ybar(h) && !ss.empty() && bs.size() >= ss.size()) {
        auto hs = arg_sorts(h->sort);
        std::size_t m = ss.size();
        if (hs.size() != m) continue;
        std::vector<Symbol> zs(bs.end() - static_cast<long>(m), bs.end());
        bool ok = true;
        for (std::size_t i = 0; i < m; ++i) ok = ok && zs[i]->sort == hs[i];
        if (!ok) continue;
        Goal ur = restrict(c->body, zs).first;
        Subst to_s, to_fresh;
        std::vector<Symbol> fresh;
        for (std::size_t i = 0; i < m; ++i) {
          to_s[zs[i]] = ss[i];
          fresh.push_back(fresh_var(zs[i]->sort, "_z"));
          to_fresh[zs[i]] = mk(fresh.back());
        }
        Goal nested = g_imp(fresh, substitute(ur, to_fresh), g_atom(mk(P, {mk(h, var_terms(fresh))})));
        emit(Rule::Assm, idx, c, g_and({substitute(ur, to_s), nested}), rebuild);
      }
    }
  }

  void visit(const std::vector<Goal>& V, const Goal& g, const Rebuild& rebuild) {
    switch (g->kind) {
      case GoalKind::True:
      case GoalKind::Exists: return;
      case GoalKind::Atom: atom(V, g, rebuild); return;
      case GoalKind::And:
        for (std::size_t i = 0; i < g->conj.size(); ++i) {
          Rebuild inner = [&, i](const Goal& r) {
            std::vector<Goal> cs = g->conj;
            cs[i] = r;
            return rebuild(g_and(std::move(cs)));
          };
          path.push_back(std::to_string(i));
          visit(V, g->conj[i], inner);
          path.pop_back();
        }
        return;
      case GoalKind::Imp: {
        const auto& zs = g->binders;
        std::vector<Symbol> fv;
        free_vars(g->head, fv);
        bool disjoint = true;
        for (Symbol z : zs) disjoint = disjoint && std::find(fv.begin(), fv.end(), z) == fv.end();
        if (disjoint) emit(Rule::Scope, -1, nullptr, g->head, rebuild);
        if (g->head->kind == GoalKind::And) {
          std::vector<Goal> parts;
          for (const auto& h : g->head->conj) parts.push_back(g_imp(zs, g->body, h));
          emit(Rule::ImpAnd, -1, nullptr, g_and(std::move(parts)), rebuild);
        }
        bool blocked = false;
        if (g->head->kind == GoalKind::Atom && g->head->atom->args.size() == 1) {
          const Term& s = g->head->atom->args[0];
          if (in_ybar(s->head) && s->args.size() == zs.size()) {
            blocked = true;
            for (std::size_t i = 0; i < zs.size(); ++i)
              blocked = blocked && s->args[i]->head == zs[i] && s->args[i]->args.empty();
          }
        }
        if (blocked) return;
        std::vector<Goal> V2 = V;
        for (const auto& c : conjuncts(g->body)) V2.push_back(c);
        Rebuild inner = [&](const Goal& r) { return rebuild(g_imp(zs, g->body, r)); };
        path.push_back("imp");
        visit(V2, g->head, inner);
        path.pop_back();
        return;
      }
    }
  }
};

long weight_imp(const std::vector<Symbol>& xs, const Goal& h);

long weight_canon(const Goal& g) {
  switch (g->kind) {
    case GoalKind::True: return 0;
    case GoalKind::Atom: {
      long d = 0;
      for (const auto& a : g->atom->args) d = std::max<long>(d, depth(a));
      return d;
    }
    case GoalKind::And: {
      long w = 0;
      for (const auto& c : g->conj) w += weight_canon(c);
      return w;
    }
    case GoalKind::Exists: return weight_canon(g->body);
    case GoalKind::Imp: return weight_imp(g->binders, g->head);
  }
  return 0;
}

long weight_imp(const std::vector<Symbol>& xs, const Goal& h) {
  switch (h->kind) {
    case GoalKind::True: return 1;
    case GoalKind::Atom: {
      std::vector<Symbol> fv;
      free_vars(h->atom, fv);
      bool mentions = false;
      for (Symbol x : xs) mentions = mentions || std::find(fv.begin(), fv.end(), x) != fv.end();
      long d = weight_canon(h);
      return mentions ? d : 1 + d;
    }
    case GoalKind::And: {
      long w = static_cast<long>(h->conj.size()) - 1;
      for (const auto& c : h->conj) w += weight_imp(xs, c);
      return w;
    }
    case GoalKind::Exists:
    case GoalKind::Imp: return 1 + weight_canon(h);
  }
  return 0;
}

}  // namespace

std::vector<RewriteStep> reducts(const RewriteContext& ctx, const Goal& g) {
  std::vector<RewriteStep> out;
  Walker w{ctx.ybar, out, {}};
  w.visit(ctx.V, g, [](const Goal& r) { return r; });
  return out;
}

long weight(const Goal& g) { return weight_canon(canonicalize_goal(g, 0)); }

std::string format_step(const RewriteStep& s) {
  std::string pos;
  for (const auto& p : s.position) pos += (pos.empty() ? "" : ".") + p;
  return rule_name(s.rule) + " side=" + (s.side_index < 0 ? std::string("-") : std::to_string(s.side_index)) +
         " pos=" + (pos.empty() ? std::string("root") : pos);
}

}  // namespace homsl
