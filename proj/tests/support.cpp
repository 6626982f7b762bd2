#include "support.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "homsl/automaton.hpp"

namespace homsl::testing {

std::string corpus_path(const std::string& name) { return std::string(HOMSL_CORPUS_DIR) + "/" + name; }

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace {

int pick(std::mt19937& rng, int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }
bool coin(std::mt19937& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

// Number of arguments after which sym's sort ends in s, or -1.
int arity_to(Sort sym, Sort s) {
  int n = 0;
  for (Sort t = sym;; t = t->right, ++n) {
    if (t == s) return n;
    if (t->kind != SortNode::Kind::Arrow) return -1;
  }
}

Sort io() { return arrow(iota(), omicron()); }

}  // namespace

Term random_term(std::mt19937& rng, const std::vector<Symbol>& syms, Sort s, int depth) {
  std::vector<std::pair<Symbol, int>> leaf, node;
  for (Symbol x : syms) {
    int n = arity_to(x->sort, s);
    if (n == 0) leaf.push_back({x, 0});
    if (n > 0) node.push_back({x, n});
  }
  if (depth < -4 && leaf.empty()) throw Error("NoTerm", "no small term of sort " + to_string(s));
  std::pair<Symbol, int> choice;
  if (!leaf.empty() && (depth <= 0 || node.empty() || coin(rng, 0.4)))
    choice = leaf[pick(rng, leaf.size())];
  else if (!node.empty())
    choice = node[pick(rng, node.size())];
  else
    throw Error("NoTerm", "no symbol of sort " + to_string(s));
  std::vector<Term> args;
  Sort t = choice.first->sort;
  for (int i = 0; i < choice.second; ++i, t = t->right) args.push_back(random_term(rng, syms, t->left, depth - 1));
  return mk(choice.first, std::move(args));
}

namespace {

Program finish(Program p) {
  p = check_program(p);
  return p;
}

Clause random_clause(std::mt19937& rng, const Program& sig, Symbol q, Symbol c, int atoms) {
  std::vector<Symbol> xs;
  for (Sort a : arg_sorts(c->sort)) xs.push_back(var("X" + std::to_string(xs.size() + 1), a));
  std::vector<Symbol> syms = xs;
  syms.insert(syms.end(), sig.constructors.begin(), sig.constructors.end());
  std::vector<Goal> body;
  for (int i = 0; i < atoms; ++i) {
    Symbol r = sig.predicates[pick(rng, sig.predicates.size())];
    if (r->sort != io()) continue;
    body.push_back(g_atom(mk(r, {random_term(rng, syms, iota(), 2)})));
  }
  return {xs, g_and(std::move(body)), mk(q, {mk(c, var_terms(xs))})};
}

}  // namespace

Program random_msl(std::mt19937& rng, int max_clauses) {
  Sort i = iota(), ii = arrow(i, i);
  std::vector<Symbol> pool{con("f", ii), con("g", arrows({i, i}, i)), con("h", arrow(ii, i)),
                           con("k", arrows({ii, i}, i)), con("d", i)};
  for (;;) try {
    Program p;
    p.constructors.push_back(con("c", i));
    for (Symbol s : pool)
      if (coin(rng)) p.constructors.push_back(s);
    if (p.constructors.size() == 1) p.constructors.push_back(pool[pick(rng, 4)]);
    p.predicates.push_back(pred("P", io()));
    if (coin(rng, 0.7)) p.predicates.push_back(pred("Q", io()));
    int n = 1 + pick(rng, max_clauses);
    for (int j = 0; j < n; ++j) {
      Symbol q = p.predicates[pick(rng, p.predicates.size())];
      Symbol c = p.constructors[pick(rng, p.constructors.size())];
      p.clauses.push_back(random_clause(rng, p, q, c, pick(rng, 3)));
    }
    std::vector<Goal> goal;
    int ng = 1 + (coin(rng, 0.25) ? 1 : 0);
    for (int j = 0; j < ng; ++j)
      goal.push_back(g_atom(mk(p.predicates[pick(rng, p.predicates.size())],
                               {random_term(rng, p.constructors, iota(), 3)})));
    p.goal = g_and(std::move(goal));
    return finish(p);
  } catch (const Error&) {
  }
}

Program random_homsl(std::mt19937& rng, int max_clauses) {
  Sort i = iota();
  for (;;) try {
    Program p;
    p.constructors = {con("c", i), con("a", arrow(i, i))};
    if (coin(rng)) p.constructors.push_back(con("g", arrows({i, i}, i)));
    Symbol P = pred("P", io()), Q = pred("Q", io());
    Symbol R = pred("R", arrows({io(), i}, omicron()));
    p.predicates = {P, Q, R};
    int n = 1 + pick(rng, max_clauses);
    std::vector<Symbol> term_syms = p.constructors;
    for (int j = 0; j < n; ++j) {
      if (coin(rng, 0.35)) {
        // R x y <= body over x : i -> o and y : i
        Symbol x = var("X1", io()), y = var("X2", i);
        std::vector<Symbol> syms{x, y, P, Q, R};
        syms.insert(syms.end(), p.constructors.begin(), p.constructors.end());
        std::vector<Goal> body;
        int atoms = 1 + pick(rng, 2);
        for (int a = 0; a < atoms; ++a) body.push_back(g_atom(random_term(rng, syms, omicron(), 2)));
        p.clauses.push_back({{x, y}, g_and(std::move(body)), mk(R, {mk(x), mk(y)})});
      } else {
        Symbol q = coin(rng) ? P : Q;
        Symbol c = p.constructors[pick(rng, p.constructors.size())];
        std::vector<Symbol> xs;
        for (Sort s : arg_sorts(c->sort)) xs.push_back(var("X" + std::to_string(xs.size() + 1), s));
        std::vector<Symbol> syms = xs;
        syms.insert(syms.end(), {P, Q, R});
        syms.insert(syms.end(), p.constructors.begin(), p.constructors.end());
        std::vector<Goal> body;
        int atoms = pick(rng, 3);
        for (int a = 0; a < atoms; ++a) body.push_back(g_atom(random_term(rng, syms, omicron(), 2)));
        p.clauses.push_back({xs, g_and(std::move(body)), mk(q, {mk(c, var_terms(xs))})});
      }
    }
    std::vector<Symbol> gs = p.constructors;
    gs.insert(gs.end(), {P, Q, R});
    p.goal = g_atom(random_term(rng, gs, omicron(), 3));
    return finish(p);
  } catch (const Error&) {
  }
}

namespace {

// Conjuncts about x : s, with fresh binders for nested clauses.
void random_about(std::mt19937& rng, const std::vector<Symbol>& preds, const Term& x, Sort s, int budget,
                  std::vector<Goal>& out) {
  std::vector<Sort> as = arg_sorts(s);
  int n = pick(rng, 3);
  for (int k = 0; k < n; ++k) {
    Symbol q = preds[pick(rng, preds.size())];
    if (as.empty()) {
      out.push_back(g_atom(mk(q, {x})));
      continue;
    }
    if (budget <= 0) continue;
    std::vector<Symbol> zs;
    std::vector<Goal> body;
    for (Sort a : as) {
      zs.push_back(fresh_var(a, "_r"));
      random_about(rng, preds, mk(zs.back()), a, budget - 1, body);
    }
    out.push_back(g_imp(zs, g_and(std::move(body)), g_atom(mk(q, {app(x, var_terms(zs))}))));
  }
}

}  // namespace

Goal random_automaton_clause(std::mt19937& rng, const std::vector<Symbol>& preds, Symbol c) {
  std::vector<Symbol> xs;
  std::vector<Goal> body;
  for (Sort a : arg_sorts(c->sort)) {
    xs.push_back(fresh_var(a, "_r"));
    random_about(rng, preds, mk(xs.back()), a, 2, body);
  }
  Goal head = g_atom(mk(preds[pick(rng, preds.size())], {mk(c, var_terms(xs))}));
  if (xs.empty()) return head;
  return canonicalize_goal(g_imp(xs, g_and(std::move(body)), head), 0);
}

IType random_type(std::mt19937& rng, const std::vector<Symbol>& preds, Sort s, int max_parts) {
  int n = pick(rng, max_parts + 1);
  std::vector<StrictPtr> parts;
  for (int k = 0; k < n; ++k) {
    std::vector<IType> args;
    for (Sort a : arg_sorts(s)) args.push_back(random_type(rng, preds, a, std::max(1, max_parts - 1)));
    parts.push_back(strict_type(std::move(args), preds[pick(rng, preds.size())]));
  }
  return inter(std::move(parts));
}

// ------------------------------------------------- subtyping closure

namespace {

StrictPtr tail_of(const StrictType& t) {
  return strict_type(std::vector<IType>(t.args.begin() + 1, t.args.end()), t.base);
}

std::string ikey(const IType& t) {
  std::string k = "{";
  for (const auto& p : t.parts) k += p->key + ";";
  return k + "}";
}

}  // namespace

SubtypeClosure::SubtypeClosure(const std::vector<IType>& seeds) {
  std::map<std::string, std::size_t> index;
  std::set<std::string> strict_seen;
  std::vector<IType> work = seeds;
  auto add = [&](const IType& t) {
    if (index.count(ikey(t))) return;
    index[ikey(t)] = dom_.size();
    dom_.push_back(t);
    keys_.push_back(ikey(t));
    work.push_back(t);
  };
  for (const auto& s : seeds) add(s);
  for (std::size_t w = 0; w < dom_.size(); ++w) {
    IType t = dom_[w];
    for (const auto& p : t.parts) {
      if (strict_seen.insert(p->key).second) strict_.push_back(p);
      add(single(p));
      for (const auto& a : p->args) add(a);
      if (!p->args.empty()) add(single(tail_of(*p)));
    }
    // Tails of intersections sharing a first argument, for Q-Fun.
    if (!t.parts.empty() && !t.parts[0]->args.empty()) {
      bool same = true;
      for (const auto& p : t.parts)
        same = same && !p->args.empty() && ikey(p->args[0]) == ikey(t.parts[0]->args[0]);
      if (same) {
        std::vector<StrictPtr> tails;
        for (const auto& p : t.parts) tails.push_back(tail_of(*p));
        add(inter(tails));
      }
    }
  }

  std::size_t n = dom_.size();
  rel_.assign(n, std::vector<char>(n, 0));
  auto sid = [&](const StrictPtr& p) { return index.at(ikey(single(p))); };
  for (bool changed = true; changed;) {
    changed = false;
    auto set = [&](std::size_t a, std::size_t b) {
      if (!rel_[a][b]) {
        rel_[a][b] = 1;
        changed = true;
      }
    };
    for (std::size_t a = 0; a < n; ++a) {
      const IType& ta = dom_[a];
      // Q-Bas (trivial preorder) and Q-Prj.
      if (ta.parts.size() == 1 && ta.parts[0]->args.empty()) set(a, a);
      for (const auto& p : ta.parts) set(a, sid(p));
      // Q-Glb.
      for (std::size_t b = 0; b < n; ++b) {
        bool all = true;
        for (const auto& p : dom_[b].parts) all = all && rel_[a][sid(p)];
        if (all) set(a, b);
      }
      // Q-Arr and Q-Fun: the right-hand side is a single arrow.
      for (std::size_t b = 0; b < n; ++b) {
        const IType& tb = dom_[b];
        if (tb.parts.size() != 1 || tb.parts[0]->args.empty() || ta.parts.empty()) continue;
        const StrictType& rb = *tb.parts[0];
        std::size_t sig2 = index.at(ikey(rb.args[0])), tau2 = sid(tail_of(rb));
        if (ta.parts.size() == 1 && !ta.parts[0]->args.empty()) {
          const StrictType& ra = *ta.parts[0];
          std::size_t sig1 = index.at(ikey(ra.args[0])), tau1 = sid(tail_of(ra));
          if (rel_[sig2][sig1] && rel_[tau1][tau2]) set(a, b);
        }
        bool shared = true;
        std::vector<StrictPtr> tails;
        for (const auto& p : ta.parts) {
          shared = shared && !p->args.empty() && ikey(p->args[0]) == ikey(rb.args[0]);
          if (shared) tails.push_back(tail_of(*p));
        }
        if (shared) {
          auto it = index.find(ikey(inter(tails)));
          if (it != index.end() && rel_[it->second][tau2]) set(a, b);
        }
      }
    }
    // Q-Trs.
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t a = 0; a < n; ++a)
        if (rel_[a][k])
          for (std::size_t b = 0; b < n; ++b)
            if (rel_[k][b]) set(a, b);
  }
}

std::size_t SubtypeClosure::id(const IType& t) const {
  auto it = std::find(keys_.begin(), keys_.end(), ikey(t));
  if (it == keys_.end()) throw Error("NotInUniverse", to_string(t));
  return it - keys_.begin();
}

bool SubtypeClosure::leq(const IType& a, const IType& b) const { return rel_[id(a)][id(b)]; }

// ----------------------------------------------------- socket oracle

namespace {

enum St { None = -1, Ready, Bound, Listening, Open, Closed };

struct Frame {
  const std::vector<Stmt>* block;
  std::size_t idx;
  int kind;  // 0 sequence, 1 forever, 2 loop
  std::string label;
  std::size_t env_size;
};

struct Config {
  std::vector<Frame> frames;
  std::vector<std::pair<std::string, bool>> env;  // socket -> tracked
  int state = None;

  std::string key() const {
    std::ostringstream k;
    for (const auto& f : frames) k << f.block << ":" << f.idx << ":" << f.kind << ":" << f.env_size << "|";
    for (const auto& [n, t] : env) k << n << (t ? "T" : "U") << ",";
    k << state;
    return k.str();
  }
  bool tracked(const std::string& s) const {
    for (auto it = env.rbegin(); it != env.rend(); ++it)
      if (it->first == s) return it->second;
    throw Error("UnboundSocket", s);
  }
};

// Next state of the tracked socket, or -1 for a violation.
int transition(int st, const std::string& op) {
  if (st == Ready && op == "bind") return Bound;
  if (st == Ready && op == "connect") return Open;
  if (st == Bound && op == "listen") return Listening;
  if (st == Listening && op == "accept") return Listening;
  if (st == Open && (op == "send" || op == "receive")) return Open;
  if (st == Open && op == "close") return Closed;
  return -1;
}

}  // namespace

bool simulate_violation(const SocketScript& s) {
  std::vector<Config> stack;
  std::set<std::string> seen;
  Config init;
  init.frames.push_back({&s.stmts, 0, 0, "", 0});
  stack.push_back(init);
  while (!stack.empty()) {
    Config c = std::move(stack.back());
    stack.pop_back();
    if (!seen.insert(c.key()).second) continue;
    if (c.frames.empty()) continue;
    Frame& f = c.frames.back();
    if (f.idx == f.block->size()) {
      c.env.resize(f.env_size);
      if (f.kind == 1) f.idx = 0;
      else c.frames.pop_back();
      stack.push_back(std::move(c));
      continue;
    }
    const Stmt& st = (*f.block)[f.idx++];
    auto push_block = [&](Config n, const std::vector<Stmt>& b, int kind, const std::string& label) {
      std::size_t es = n.env.size();
      n.frames.push_back({&b, 0, kind, label, es});
      stack.push_back(std::move(n));
    };
    switch (st.kind) {
      case Stmt::Kind::Pure: stack.push_back(std::move(c)); break;
      case Stmt::Kind::Op:
        if (c.tracked(st.sock)) {
          int n = transition(c.state, st.op);
          if (n < 0) return true;
          c.state = n;
        }
        stack.push_back(std::move(c));
        break;
      case Stmt::Kind::Socket:
      case Stmt::Kind::Accept: {
        bool create_tracked;
        if (st.kind == Stmt::Kind::Accept && c.tracked(st.sock)) {
          if (transition(c.state, "accept") < 0) return true;
          create_tracked = false;
        } else {
          create_tracked = c.state == None;
        }
        if (create_tracked) {
          Config t = c;
          t.env.push_back({st.name, true});
          t.state = st.kind == Stmt::Kind::Socket ? Ready : Open;
          stack.push_back(std::move(t));
        }
        c.env.push_back({st.name, false});
        stack.push_back(std::move(c));
        break;
      }
      case Stmt::Kind::Forever: push_block(c, st.body, 1, ""); break;
      case Stmt::Kind::Loop: push_block(c, st.body, 2, st.name); break;
      case Stmt::Kind::Continue: {
        while (!c.frames.empty() && !(c.frames.back().kind == 2 && c.frames.back().label == st.name)) {
          c.env.resize(c.frames.back().env_size);
          c.frames.pop_back();
        }
        if (c.frames.empty()) throw Error("MalformedLoop", st.name);
        c.env.resize(c.frames.back().env_size);
        c.frames.back().idx = 0;
        stack.push_back(std::move(c));
        break;
      }
      case Stmt::Kind::Branch:
        push_block(c, st.body, 0, "");
        push_block(c, st.alt, 0, "");
        break;
    }
  }
  return false;
}

namespace {

struct ScriptGen {
  std::mt19937& rng;
  int created = 0;
  int labels = 0;

  std::vector<Stmt> block(int depth, std::vector<std::string> scope, std::vector<std::string> loops) {
    std::vector<Stmt> out;
    int n = 1 + pick(rng, 4);
    for (int i = 0; i < n; ++i) {
      bool last = i + 1 == n;
      Stmt s;
      int r = pick(rng, 10);
      if (scope.empty() || (r < 2 && created < 2)) {
        if (created >= 2) {
          s.kind = Stmt::Kind::Pure;
        } else if (!scope.empty() && coin(rng)) {
          s.kind = Stmt::Kind::Accept;
          s.sock = scope[pick(rng, scope.size())];
          s.name = "s" + std::to_string(++created);
          scope.push_back(s.name);
        } else {
          s.kind = Stmt::Kind::Socket;
          s.name = "s" + std::to_string(++created);
          scope.push_back(s.name);
        }
      } else if (r < 6) {
        static const char* ops[] = {"bind", "connect", "listen", "send", "receive", "close"};
        s.kind = Stmt::Kind::Op;
        s.op = ops[pick(rng, 6)];
        s.sock = scope[pick(rng, scope.size())];
      } else if (r == 6 && depth < 2) {
        s.kind = Stmt::Kind::Branch;
        s.body = block(depth + 1, scope, loops);
        s.alt = block(depth + 1, scope, loops);
      } else if (r == 7 && depth < 2) {
        s.kind = Stmt::Kind::Loop;
        s.name = "k" + std::to_string(++labels);
        auto inner = loops;
        inner.push_back(s.name);
        s.body = block(depth + 1, scope, inner);
      } else if (r == 8 && depth < 2 && last) {
        s.kind = Stmt::Kind::Forever;
        s.body = block(depth + 1, scope, loops);
      } else if (r == 9 && last && !loops.empty()) {
        s.kind = Stmt::Kind::Continue;
        s.name = loops[pick(rng, loops.size())];
      } else {
        s.kind = Stmt::Kind::Pure;
      }
      out.push_back(std::move(s));
    }
    return out;
  }
};

void print_block(const std::vector<Stmt>& b, int indent, std::string& out) {
  std::string pad(indent * 2, ' ');
  for (const auto& s : b) {
    switch (s.kind) {
      case Stmt::Kind::Pure: out += pad + "pure ()\n"; break;
      case Stmt::Kind::Op: out += pad + s.op + " " + s.sock + "\n"; break;
      case Stmt::Kind::Socket: out += pad + "let " + s.name + " = socket\n"; break;
      case Stmt::Kind::Accept: out += pad + "let " + s.name + " = accept " + s.sock + "\n"; break;
      case Stmt::Kind::Continue: out += pad + s.name + "\n"; break;
      case Stmt::Kind::Forever:
        out += pad + "forever {\n";
        print_block(s.body, indent + 1, out);
        out += pad + "}\n";
        break;
      case Stmt::Kind::Loop:
        out += pad + "loop " + s.name + " {\n";
        print_block(s.body, indent + 1, out);
        out += pad + "}\n";
        break;
      case Stmt::Kind::Branch:
        out += pad + "branch (c) {\n";
        print_block(s.body, indent + 1, out);
        out += pad + "} {\n";
        print_block(s.alt, indent + 1, out);
        out += pad + "}\n";
        break;
    }
  }
}

}  // namespace

SocketScript random_script(std::mt19937& rng) {
  ScriptGen g{rng};
  SocketScript s;
  s.stmts = g.block(0, {}, {});
  return s;
}

std::string print_script(const SocketScript& s) {
  std::string out;
  print_block(s.stmts, 0, out);
  return out;
}

}  // namespace homsl::testing
