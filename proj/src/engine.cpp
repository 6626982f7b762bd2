#include "homsl/engine.hpp"

#include <algorithm>
#include <climits>
#include <cstdlib>

#include "homsl/automaton.hpp"

namespace homsl {

// ------------------------------------------------------------ index

namespace {
const std::vector<std::size_t> kNone;

Term clause_head(const Goal& g) { return g->kind == GoalKind::Atom ? g->atom : g->head->atom; }
}  // namespace

bool ClauseIndex::add(const Goal& clause) {
  Goal c = canonicalize_goal(clause, 0);
  if (!keys_.insert(to_string(c)).second) return false;
  Term h = clause_head(c);
  std::size_t id = clauses_.size();
  clauses_.push_back(c);
  by_pred_[h->head].push_back(id);
  by_pred_head_[{h->head, h->args.at(0)->head}].push_back(id);
  return true;
}

bool ClauseIndex::contains(const Goal& clause) const {
  return keys_.count(to_string(canonicalize_goal(clause, 0))) > 0;
}

const std::vector<std::size_t>& ClauseIndex::with_pred(Symbol p) const {
  auto it = by_pred_.find(p);
  return it == by_pred_.end() ? kNone : it->second;
}

const std::vector<std::size_t>& ClauseIndex::with_pred_head(Symbol p, Symbol h) const {
  auto it = by_pred_head_.find({p, h});
  return it == by_pred_head_.end() ? kNone : it->second;
}

std::size_t default_budget() {
  if (const char* e = std::getenv("HOMSL_BUDGET")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(e, &end, 10);
    if (end && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return 1000000;
}

// ------------------------------------------------------------ engine

namespace {

// A pending goal "forall z1. U1 => ... forall zk. Uk => P (h ss)".
struct Frame {
  std::vector<Symbol> binders;
  std::vector<Goal> body;
};
using FrameP = std::shared_ptr<const Frame>;

struct Item {
  std::vector<FrameP> frames;
  Term atom;
};

struct Lit {
  std::string key;
  Goal goal;
};
using LitP = std::shared_ptr<const Lit>;
using Alt = std::vector<LitP>;  // sorted by key, no duplicates
using FSet = std::vector<Alt>;

constexpr int kNoLow = INT_MAX;

LitP make_lit(const Goal& g) {
  Goal c = canonicalize_goal(g, 0);
  return std::make_shared<const Lit>(Lit{to_string(c), c});
}

bool key_less(const LitP& a, const LitP& b) { return a->key < b->key; }

bool alt_less(const Alt& a, const Alt& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i]->key != b[i]->key) return a[i]->key < b[i]->key;
  return false;
}

void normalize_alt(Alt& a) {
  std::sort(a.begin(), a.end(), key_less);
  a.erase(std::unique(a.begin(), a.end(), [](const LitP& x, const LitP& y) { return x->key == y->key; }),
          a.end());
}

Alt merge(const Alt& a, const Alt& b) {
  Alt out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out), key_less);
  return out;
}

bool subset(const Alt& a, const Alt& b) { return std::includes(b.begin(), b.end(), a.begin(), a.end(), key_less); }

// Keeps the alternatives not subsumed by a smaller one, in a fixed order.
void minimize(FSet& fs) {
  std::sort(fs.begin(), fs.end(), alt_less);
  FSet kept;
  for (auto& a : fs) {
    bool sub = false;
    for (const auto& k : kept)
      if (subset(k, a)) {
        sub = true;
        break;
      }
    if (!sub) kept.push_back(std::move(a));
  }
  fs = std::move(kept);
}

FSet product(const FSet& a, const FSet& b) {
  FSet out;
  for (const auto& x : a)
    for (const auto& y : b) out.push_back(merge(x, y));
  minimize(out);
  return out;
}

int frame_of(const std::vector<FrameP>& frames, Symbol v) {
  for (std::size_t k = 0; k < frames.size(); ++k)
    for (Symbol b : frames[k]->binders)
      if (b == v) return static_cast<int>(k);
  return -1;
}

bool contains_sym(const std::vector<Symbol>& vs, Symbol v) { return std::find(vs.begin(), vs.end(), v) != vs.end(); }

struct Canon {
  Item item;
  std::string key;
  Subst back;
  bool terminal = false;
};

// Drops frames the atom no longer mentions, then renames free variables to
// _f<i> and frame binders by depth so that equal items share a key.
Canon canonical(const Item& raw) {
  std::vector<Symbol> fv;
  free_vars(raw.atom, fv);
  std::vector<FrameP> kept;
  for (const auto& f : raw.frames) {
    bool used = false;
    for (Symbol b : f->binders) used = used || contains_sym(fv, b);
    if (used) kept.push_back(f);
  }
  Canon c;
  Subst ren;
  std::string key;
  std::size_t nfree = 0;
  for (Symbol v : fv) {
    if (frame_of(kept, v) >= 0 || ren.count(v)) continue;
    Symbol nv = var("_f" + std::to_string(nfree++), v->sort);
    ren[v] = mk(nv);
    c.back[nv] = mk(v);
    key += nv->name + ":" + to_string(v->sort) + ";";
  }
  for (std::size_t k = 0; k < kept.size(); ++k) {
    Subst fr;
    auto nf = std::make_shared<Frame>();
    key += "[";
    for (std::size_t j = 0; j < kept[k]->binders.size(); ++j) {
      Symbol b = kept[k]->binders[j];
      Symbol nb = var(nested_name(static_cast<int>(k) + 1, j + 1), b->sort);
      nf->binders.push_back(nb);
      if (nb != b) fr[b] = mk(nb);
      ren[b] = mk(nb);
      key += to_string(b->sort) + ",";
    }
    for (const auto& g : kept[k]->body)
      for (const auto& x : conjuncts(canonicalize_goal(substitute(g, fr), static_cast<int>(k) + 1)))
        nf->body.push_back(x);
    std::sort(nf->body.begin(), nf->body.end(), [](const Goal& a, const Goal& b) { return compare_goals(a, b) < 0; });
    nf->body.erase(std::unique(nf->body.begin(), nf->body.end(), goal_equal), nf->body.end());
    key += "|";
    for (const auto& g : nf->body) key += to_string(g) + "&";
    key += "]";
    c.item.frames.push_back(std::move(nf));
  }
  c.item.atom = substitute(raw.atom, ren);
  key += to_string(c.item.atom);
  c.key = std::move(key);

  const Term& a = c.item.atom;
  if (a->args.size() == 1) {
    const Term& s = a->args[0];
    bool free_head = s->head->kind == SymKind::Variable && frame_of(c.item.frames, s->head) < 0;
    if (free_head && c.item.frames.empty() && s->args.empty()) c.terminal = true;
    if (free_head && c.item.frames.size() == 1) {
      const auto& bs = c.item.frames[0]->binders;
      bool exact = s->args.size() == bs.size();
      for (std::size_t i = 0; exact && i < bs.size(); ++i)
        exact = s->args[i]->head == bs[i] && s->args[i]->args.empty();
      c.terminal = exact;
    }
  }
  return c;
}

Goal terminal_goal(const Item& it) {
  if (it.frames.empty()) return g_atom(it.atom);
  const auto& f = *it.frames[0];
  return g_imp(f.binders, g_and(f.body), g_atom(it.atom));
}

// Turns a template body (after substitution) into items below `frames`.
void expand(const Goal& g, const Subst& sigma, const std::vector<FrameP>& frames, std::vector<Item>& out) {
  switch (g->kind) {
    case GoalKind::True: return;
    case GoalKind::And:
      for (const auto& c : g->conj) expand(c, sigma, frames, out);
      return;
    case GoalKind::Atom: out.push_back(Item{frames, substitute(g->atom, sigma)}); return;
    case GoalKind::Imp: {
      Subst inner = sigma;
      auto f = std::make_shared<Frame>();
      int k = static_cast<int>(frames.size());
      for (std::size_t j = 0; j < g->binders.size(); ++j) {
        Symbol nb = var(nested_name(k + 1, j + 1), g->binders[j]->sort);
        f->binders.push_back(nb);
        inner[g->binders[j]] = mk(nb);
      }
      f->body = conjuncts(substitute(g->body, inner));
      std::vector<FrameP> fs = frames;
      fs.push_back(std::move(f));
      expand(g->head, inner, fs, out);
      return;
    }
    case GoalKind::Exists: throw Error("Unsupported", "existential quantifier in a goal given to the normaliser");
  }
}

}  // namespace

struct Engine::Impl {
  Engine& e;
  std::unordered_map<std::string, FSet> memo;
  std::unordered_map<std::string, int> onstack;

  explicit Impl(Engine& en) : e(en) {}

  FSet rename(const FSet& fs, const Subst& back) {
    FSet out;
    out.reserve(fs.size());
    for (const auto& a : fs) {
      Alt b;
      b.reserve(a.size());
      for (const auto& l : a) b.push_back(make_lit(substitute(l->goal, back)));
      normalize_alt(b);
      out.push_back(std::move(b));
    }
    std::sort(out.begin(), out.end(), alt_less);
    return out;
  }

  // Alternatives for one canonical, non-terminal item; each is a list of
  // items whose conjunction the item rewrites to.
  std::vector<std::vector<Item>> reductions(const Item& it) {
    std::vector<std::vector<Item>> out;
    const ClauseIndex& idx = *e.index_;
    const Term& atom = it.atom;
    if (atom->args.size() != 1) return out;
    Symbol P = atom->head;
    const Term& arg = atom->args[0];
    Symbol h = arg->head;
    const auto& ss = arg->args;
    bool free_head = h->kind == SymKind::Variable && frame_of(it.frames, h) < 0;

    std::vector<Goal> local;  // frame clauses with predicate P
    for (const auto& f : it.frames)
      for (const auto& c : f->body) {
        if (c->kind == GoalKind::Atom) {
          if (ss.empty() && term_equal(c->atom, atom)) {
            out.push_back({});
            return out;
          }
        } else if (c->kind == GoalKind::Imp && c->head->kind == GoalKind::Atom && c->head->atom->head == P) {
          local.push_back(c);
        }
      }

    auto step = [&](const Goal& c) {
      if (c->kind == GoalKind::Atom) {
        if (term_equal(c->atom, atom)) out.push_back({});
        return;
      }
      const Term& ch = c->head->atom;
      if (ch->args.size() != 1 || ch->args[0]->head != h || c->binders.size() != ss.size()) return;
      Subst s;
      for (std::size_t i = 0; i < ss.size(); ++i) s[c->binders[i]] = ss[i];
      std::vector<Item> items;
      expand(c->body, s, it.frames, items);
      out.push_back(std::move(items));
    };
    for (std::size_t id : idx.with_pred_head(P, h)) step(idx.clauses()[id]);
    for (const auto& c : local) step(c);

    if (free_head && !ss.empty()) {
      auto hs = arg_sorts(h->sort);
      std::size_t m = ss.size();
      if (hs.size() != m) return out;
      std::unordered_set<std::string> seen;
      auto assm = [&](const Goal& c) {
        if (c->kind != GoalKind::Imp || c->binders.size() < m) return;
        std::vector<Symbol> zs(c->binders.end() - static_cast<long>(m), c->binders.end());
        for (std::size_t i = 0; i < m; ++i)
          if (zs[i]->sort != hs[i]) return;
        Goal ur = restrict(c->body, zs).first;
        if (!seen.insert(to_string(canonicalize_goal(g_imp(zs, ur, g_true()), 0))).second) return;
        Subst s;
        for (std::size_t i = 0; i < m; ++i) s[zs[i]] = ss[i];
        std::vector<Item> items;
        expand(ur, s, it.frames, items);
        Subst fr;
        auto f = std::make_shared<Frame>();
        int k = static_cast<int>(it.frames.size());
        std::vector<Term> zargs;
        for (std::size_t i = 0; i < m; ++i) {
          Symbol nb = var(nested_name(k + 1, i + 1), zs[i]->sort);
          f->binders.push_back(nb);
          fr[zs[i]] = mk(nb);
          zargs.push_back(mk(nb));
        }
        f->body = conjuncts(substitute(ur, fr));
        std::vector<FrameP> fs = it.frames;
        fs.push_back(std::move(f));
        items.push_back(Item{std::move(fs), mk(P, {mk(h, std::move(zargs))})});
        out.push_back(std::move(items));
      };
      for (std::size_t id : idx.with_pred(P)) assm(idx.clauses()[id]);
      for (const auto& c : local) assm(c);
    }
    return out;
  }

  std::pair<FSet, int> nf(const Item& raw) {
    Canon c = canonical(raw);
    if (c.terminal) return {FSet{Alt{make_lit(substitute(terminal_goal(c.item), c.back))}}, kNoLow};
    if (auto m = memo.find(c.key); m != memo.end()) {
      ++e.stats_.memo_hits;
      return {rename(m->second, c.back), kNoLow};
    }
    if (auto s = onstack.find(c.key); s != onstack.end()) {
      ++e.stats_.cuts;
      return {FSet{}, s->second};
    }
    if (++e.stats_.expanded > e.budget_)
      throw Error("BudgetExceeded", "normalisation expanded more than " + std::to_string(e.budget_) + " items");
    int d = static_cast<int>(onstack.size());
    onstack.emplace(c.key, d);
    FSet acc;
    int low = kNoLow;
    for (const auto& children : reductions(c.item)) {
      FSet prod{Alt{}};
      for (const auto& ch : children) {
        auto [fs, l] = nf(ch);
        low = std::min(low, l);
        prod = product(prod, fs);
        if (prod.empty()) break;
      }
      for (auto& a : prod) acc.push_back(std::move(a));
    }
    onstack.erase(c.key);
    minimize(acc);
    if (low >= d) {
      memo.emplace(c.key, acc);
      e.stats_.memo_size = memo.size();
      low = kNoLow;
    }
    return {rename(acc, c.back), low};
  }

  void goal_items(const Goal& g, const std::vector<FrameP>& frames, std::vector<Item>& out) {
    switch (g->kind) {
      case GoalKind::True: return;
      case GoalKind::Atom: out.push_back(Item{frames, g->atom}); return;
      case GoalKind::And:
        for (const auto& c : g->conj) goal_items(c, frames, out);
        return;
      case GoalKind::Imp: {
        Subst m;
        auto f = std::make_shared<Frame>();
        int k = static_cast<int>(frames.size());
        for (std::size_t j = 0; j < g->binders.size(); ++j) {
          Symbol nb = var(nested_name(k + 1, j + 1), g->binders[j]->sort);
          f->binders.push_back(nb);
          m[g->binders[j]] = mk(nb);
        }
        f->body = conjuncts(substitute(g->body, m));
        std::vector<FrameP> fs = frames;
        fs.push_back(std::move(f));
        goal_items(substitute(g->head, m), fs, out);
        return;
      }
      case GoalKind::Exists: throw Error("Unsupported", "existential quantifier in a goal given to the normaliser");
    }
  }
};

Engine::Engine(std::shared_ptr<const ClauseIndex> index, std::size_t budget)
    : index_(std::move(index)), budget_(budget), impl_(std::make_unique<Impl>(*this)) {}

Engine::~Engine() = default;

std::vector<Goal> Engine::normal_forms(const Goal& g, const std::vector<Symbol>& ybar) {
  (void)ybar;
  impl_->onstack.clear();
  std::vector<Item> items;
  impl_->goal_items(g, {}, items);
  FSet acc{Alt{}};
  for (const auto& it : items) {
    acc = product(acc, impl_->nf(it).first);
    if (acc.empty()) break;
  }
  std::vector<Goal> out;
  for (const auto& a : acc) {
    std::vector<Goal> gs;
    for (const auto& l : a) gs.push_back(l->goal);
    out.push_back(canonicalize_goal(g_and(std::move(gs)), 0));
  }
  return out;
}

bool Engine::holds(const Goal& g) {
  for (const auto& f : normal_forms(g, {}))
    if (f->kind == GoalKind::True) return true;
  return false;
}

}  // namespace homsl
