#include "homsl/surface.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>

namespace homsl {

namespace {

// ---------------------------------------------------------------- lexer

enum class Tok { Ident, String, LParen, RParen, Dot, Colon, Arrow, Implied, And, Query, Implies, End };

struct Token {
  Tok kind;
  std::string text;
  int line, col;
};

std::vector<Token> lex(const std::string& s) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto err = [&](const std::string& m) {
    throw Error("ParseError", std::to_string(line) + ":" + std::to_string(col) + ": " + m);
  };
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (s[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < s.size()) {
    char c = s[i];
    if (c == '%') {
      while (i < s.size() && s[i] != '\n') advance(1);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    int l = line, cl = col;
    auto push = [&](Tok k, std::size_t n) {
      out.push_back({k, s.substr(i, n), l, cl});
      advance(n);
    };
    if (c == '"') {
      std::size_t j = i + 1;
      while (j < s.size() && s[j] != '"' && s[j] != '\n') ++j;
      if (j >= s.size() || s[j] != '"') err("unterminated string literal");
      push(Tok::String, j - i + 1);
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < s.size() && is_identifier_char(s[j])) ++j;
      push(Tok::Ident, j - i);
      continue;
    }
    auto starts = [&](const char* p) { return s.compare(i, std::char_traits<char>::length(p), p) == 0; };
    if (starts("->")) push(Tok::Arrow, 2);
    else if (starts("<=")) push(Tok::Implied, 2);
    else if (starts("=>")) push(Tok::Implies, 2);
    else if (starts("/\\")) push(Tok::And, 2);
    else if (starts("?-")) push(Tok::Query, 2);
    else if (c == '(') push(Tok::LParen, 1);
    else if (c == ')') push(Tok::RParen, 1);
    else if (c == '.') push(Tok::Dot, 1);
    else if (c == ':') push(Tok::Colon, 1);
    else err(std::string("unexpected character '") + c + "'");
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

bool is_keyword(const std::string& s) {
  return s == "true" || s == "exists" || s == "forall" || s == "data" || s == "pred";
}

// ------------------------------------------------------------ raw syntax

struct RTerm {
  std::string name;
  bool is_string = false;
  std::vector<RTerm> args;
  int line = 0, col = 0;
};

struct RGoal;
using RGoalP = std::shared_ptr<RGoal>;

struct RGoal {
  GoalKind kind;
  RTerm atom;
  std::vector<RGoalP> conj;
  std::string var;
  Sort var_sort = nullptr;
  std::vector<std::string> binders;
  RGoalP body, head;
};

class Parser {
public:
  explicit Parser(const std::string& text) : toks_(lex(text)) {}

  const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  bool at(Tok k) const { return peek().kind == k; }
  bool at_ident(const char* s) const { return at(Tok::Ident) && peek().text == s; }

  [[noreturn]] void fail(const std::string& m) const {
    throw Error("ParseError", std::to_string(peek().line) + ":" + std::to_string(peek().col) + ": " + m);
  }

  Token expect(Tok k, const char* what) {
    if (!at(k)) fail(std::string("expected ") + what + (peek().text.empty() ? "" : ", found '" + peek().text + "'"));
    return toks_[pos_++];
  }

  std::string ident() {
    Token t = expect(Tok::Ident, "identifier");
    if (is_keyword(t.text)) {
      --pos_;
      fail("unexpected keyword '" + t.text + "'");
    }
    return t.text;
  }

  Sort sort() {
    Sort left;
    if (at(Tok::LParen)) {
      ++pos_;
      left = sort();
      expect(Tok::RParen, "')'");
    } else {
      std::string n = expect(Tok::Ident, "sort").text;
      if (n == "i") left = iota();
      else if (n == "o") left = omicron();
      else {
        --pos_;
        fail("unknown sort '" + n + "'");
      }
    }
    if (at(Tok::Arrow)) {
      ++pos_;
      return arrow(left, sort());
    }
    return left;
  }

  bool at_term_start() const {
    if (at(Tok::String) || at(Tok::LParen)) return true;
    return at(Tok::Ident) && !is_keyword(peek().text);
  }

  RTerm primary() {
    if (at(Tok::LParen)) {
      ++pos_;
      RTerm t = term();
      expect(Tok::RParen, "')'");
      return t;
    }
    RTerm t;
    t.line = peek().line;
    t.col = peek().col;
    if (at(Tok::String)) {
      t.name = toks_[pos_++].text;
      t.is_string = true;
      return t;
    }
    t.name = ident();
    return t;
  }

  RTerm term() {
    RTerm t = primary();
    while (at_term_start()) t.args.push_back(primary());
    return t;
  }

  RGoalP body() {
    auto first = unit();
    if (!at(Tok::And)) return first;
    auto g = std::make_shared<RGoal>();
    g->kind = GoalKind::And;
    g->conj.push_back(first);
    while (at(Tok::And)) {
      ++pos_;
      g->conj.push_back(unit());
    }
    return g;
  }

  RGoalP unit() {
    auto g = std::make_shared<RGoal>();
    if (at_ident("true")) {
      ++pos_;
      g->kind = GoalKind::True;
      return g;
    }
    if (at_ident("exists")) {
      ++pos_;
      g->kind = GoalKind::Exists;
      g->var = ident();
      if (at(Tok::Colon)) {
        ++pos_;
        g->var_sort = sort();
      }
      expect(Tok::Dot, "'.' after existential binder");
      g->body = body();
      return g;
    }
    if (at_ident("forall")) return forall();
    if (at(Tok::LParen)) {
      ++pos_;
      auto inner = body();
      expect(Tok::RParen, "')'");
      return inner;
    }
    g->kind = GoalKind::Atom;
    g->atom = term();
    return g;
  }

  RGoalP forall() {
    ++pos_;
    auto g = std::make_shared<RGoal>();
    g->kind = GoalKind::Imp;
    while (!at(Tok::Dot)) g->binders.push_back(ident());
    ++pos_;
    g->body = body();
    expect(Tok::Implies, "'=>' in nested implication");
    g->head = std::make_shared<RGoal>();
    g->head->kind = GoalKind::Atom;
    g->head->atom = term();
    return g;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

// -------------------------------------------------------- sort inference

class Infer {
public:
  struct Node {
    int kind;  // 0 iota, 1 omicron, 2 arrow, 3 meta
    int l = -1, r = -1;
    int parent;
  };

  int fresh() {
    int id = static_cast<int>(nodes_.size());
    nodes_.push_back({3, -1, -1, id});
    return id;
  }

  int of_sort(Sort s) {
    int id = static_cast<int>(nodes_.size());
    if (s->kind == SortNode::Kind::Arrow) {
      int l = of_sort(s->left), r = of_sort(s->right);
      id = static_cast<int>(nodes_.size());
      nodes_.push_back({2, l, r, id});
    } else {
      nodes_.push_back({s->kind == SortNode::Kind::Iota ? 0 : 1, -1, -1, id});
    }
    return id;
  }

  int arrow_node(int l, int r) {
    int id = static_cast<int>(nodes_.size());
    nodes_.push_back({2, l, r, id});
    return id;
  }

  int find(int x) {
    while (nodes_[x].parent != x) {
      nodes_[x].parent = nodes_[nodes_[x].parent].parent;
      x = nodes_[x].parent;
    }
    return x;
  }

  bool occurs(int m, int x) {
    x = find(x);
    if (x == m) return true;
    if (nodes_[x].kind == 2) return occurs(m, nodes_[x].l) || occurs(m, nodes_[x].r);
    return false;
  }

  bool unify(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return true;
    if (nodes_[a].kind == 3) {
      if (occurs(a, b)) return false;
      nodes_[a].parent = b;
      return true;
    }
    if (nodes_[b].kind == 3) return unify(b, a);
    if (nodes_[a].kind != nodes_[b].kind) return false;
    if (nodes_[a].kind != 2) return true;
    int al = nodes_[a].l, ar = nodes_[a].r, bl = nodes_[b].l, br = nodes_[b].r;
    nodes_[a].parent = b;
    return unify(al, bl) && unify(ar, br);
  }

  Sort resolve(int x) {
    x = find(x);
    switch (nodes_[x].kind) {
      case 0: return iota();
      case 1: return omicron();
      case 2: return arrow(resolve(nodes_[x].l), resolve(nodes_[x].r));
      default: return iota();
    }
  }

private:
  std::vector<Node> nodes_;
};

// Elaborates raw syntax into typed core syntax for one clause, goal or term.
class Elaborator {
public:
  Elaborator(Program& prog, bool declare_strings) : prog_(prog), declare_strings_(declare_strings) {}

  struct VarInfo {
    std::string name;
    int meta;
    int first_seen;
  };

  // Variable scopes: name -> index into vars_.
  std::vector<std::pair<std::string, int>> scope_;
  std::vector<VarInfo> vars_;
  Infer inf_;

  std::map<std::string, int> globals_;

  int lookup_or_create(const std::string& name) {
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it)
      if (it->first == name) return it->second;
    auto g = globals_.find(name);
    if (g != globals_.end()) return g->second;
    int id = static_cast<int>(vars_.size());
    vars_.push_back({name, inf_.fresh(), id});
    globals_[name] = id;
    return id;
  }

  bool is_global(std::size_t i) const {
    for (const auto& [n, id] : globals_)
      if (id == static_cast<int>(i)) return true;
    return false;
  }

  int bind(const std::string& name, Sort s) {
    int id = static_cast<int>(vars_.size());
    vars_.push_back({name, s ? inf_.of_sort(s) : inf_.fresh(), id});
    scope_.push_back({name, id});
    return id;
  }

  // Annotated raw term: var index per node.
  struct ATerm {
    Symbol sym = nullptr;
    int var = -1;
    std::vector<ATerm> args;
  };

  [[noreturn]] void fail_at(const RTerm& t, const std::string& code, const std::string& m) {
    throw Error(code, std::to_string(t.line) + ":" + std::to_string(t.col) + ": " + m);
  }

  Symbol declared(const RTerm& t) {
    if (t.is_string) {
      Symbol s = prog_.find(t.name);
      if (!s) {
        s = con(t.name, iota());
        if (!declare_strings_) fail_at(t, "UnknownSymbol", "unknown literal " + t.name);
        prog_.constructors.push_back(s);
      }
      return s;
    }
    return prog_.find(t.name);
  }

  std::pair<ATerm, int> infer(const RTerm& t) {
    ATerm a;
    int m;
    Symbol s = nullptr;
    bool bound = false;
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it)
      if (it->first == t.name) bound = true;
    if (!bound) s = declared(t);
    if (s) {
      a.sym = s;
      m = inf_.of_sort(s->sort);
    } else {
      a.var = lookup_or_create(t.name);
      m = vars_[a.var].meta;
    }
    for (const auto& arg : t.args) {
      auto [aa, am] = infer(arg);
      a.args.push_back(std::move(aa));
      int r = inf_.fresh();
      if (!inf_.unify(m, inf_.arrow_node(am, r)))
        fail_at(t, "UnsortedTerm", "ill-sorted application of " + t.name);
      m = r;
    }
    return {std::move(a), m};
  }

  struct AGoal {
    GoalKind kind;
    ATerm atom;
    std::vector<AGoal> conj;
    int var = -1;
    std::vector<int> binders;
    std::vector<AGoal> sub;  // body, head
  };

  AGoal infer_goal(const RGoalP& g) {
    AGoal a;
    a.kind = g->kind;
    switch (g->kind) {
      case GoalKind::True: break;
      case GoalKind::Atom: {
        auto [t, m] = infer(g->atom);
        if (!inf_.unify(m, inf_.of_sort(omicron())))
          fail_at(g->atom, "IllTyped", "atom is not of sort o");
        a.atom = std::move(t);
        break;
      }
      case GoalKind::And:
        for (const auto& c : g->conj) a.conj.push_back(infer_goal(c));
        break;
      case GoalKind::Exists: {
        std::size_t mark = scope_.size();
        a.var = bind(g->var, g->var_sort);
        a.sub.push_back(infer_goal(g->body));
        scope_.resize(mark);
        break;
      }
      case GoalKind::Imp: {
        std::size_t mark = scope_.size();
        for (const auto& b : g->binders) a.binders.push_back(bind(b, nullptr));
        a.sub.push_back(infer_goal(g->body));
        a.sub.push_back(infer_goal(g->head));
        scope_.resize(mark);
        break;
      }
    }
    return a;
  }

  std::vector<Symbol> syms_;

  void finish() {
    syms_.clear();
    for (const auto& v : vars_) syms_.push_back(var(v.name, inf_.resolve(v.meta)));
  }

  Term build(const ATerm& a) {
    std::vector<Term> args;
    for (const auto& x : a.args) args.push_back(build(x));
    return mk(a.sym ? a.sym : syms_[a.var], std::move(args));
  }

  Goal build_goal(const AGoal& a) {
    switch (a.kind) {
      case GoalKind::True: return g_true();
      case GoalKind::Atom: return g_atom(build(a.atom));
      case GoalKind::And: {
        std::vector<Goal> cs;
        for (const auto& c : a.conj) cs.push_back(build_goal(c));
        return g_and(std::move(cs));
      }
      case GoalKind::Exists: return g_exists(syms_[a.var], build_goal(a.sub[0]));
      case GoalKind::Imp: {
        std::vector<Symbol> bs;
        for (int b : a.binders) bs.push_back(syms_[b]);
        return g_imp(std::move(bs), build_goal(a.sub[0]), build_goal(a.sub[1]));
      }
    }
    return g_true();
  }

  Program& prog_;
  bool declare_strings_;
};

bool is_declared_name(const Program& p, const std::string& n) { return p.find(n) != nullptr; }

}  // namespace

Sort parse_sort(const std::string& text) {
  Parser ps(text);
  Sort s = ps.sort();
  ps.expect(Tok::End, "end of input");
  return s;
}

Program parse_program(const std::string& text) {
  Parser ps(text);
  Program prog;
  while (!ps.at(Tok::End)) {
    if (ps.at_ident("data") || ps.at_ident("pred")) {
      bool is_data = ps.peek().text == "data";
      ++ps.pos_;
      std::vector<std::string> names;
      do names.push_back(ps.ident());
      while (!ps.at(Tok::Colon));
      ps.expect(Tok::Colon, "':'");
      Sort s = ps.sort();
      ps.expect(Tok::Dot, "'.'");
      for (const auto& n : names) {
        if (is_declared_name(prog, n)) throw Error("DuplicateDeclaration", "duplicate declaration " + n);
        if (is_data) prog.constructors.push_back(con(n, s));
        else prog.predicates.push_back(pred(n, s));
      }
      continue;
    }
    if (ps.at(Tok::Query)) {
      ++ps.pos_;
      auto rg = ps.body();
      ps.expect(Tok::Dot, "'.' after goal");
      if (prog.goal) ps.fail("more than one goal");
      Elaborator el(prog, true);
      auto ag = el.infer_goal(rg);
      el.finish();
      Goal g = el.build_goal(ag);
      prog.goal = g;
      continue;
    }
    RTerm head = ps.term();
    RGoalP body;
    if (ps.at(Tok::Implied)) {
      ++ps.pos_;
      body = ps.body();
    }
    ps.expect(Tok::Dot, "'.' at end of clause");
    Elaborator el(prog, true);
    auto [ah, hm] = el.infer(head);
    if (!el.inf_.unify(hm, el.inf_.of_sort(omicron())))
      throw Error("IllTyped", std::to_string(head.line) + ":" + std::to_string(head.col) + ": head is not of sort o");
    std::size_t nhead = el.vars_.size();
    Elaborator::AGoal ab;
    ab.kind = GoalKind::True;
    if (body) ab = el.infer_goal(body);
    el.finish();
    Clause c;
    for (std::size_t i = 0; i < nhead; ++i) c.binders.push_back(el.syms_[i]);
    c.head = el.build(ah);
    c.body = el.build_goal(ab);
    // Variables occurring only in the body are existentially quantified there.
    for (std::size_t i = el.vars_.size(); i-- > nhead;)
      if (el.is_global(i)) c.body = g_exists(el.syms_[i], c.body);
    prog.clauses.push_back(std::move(c));
  }
  return check_program(prog);
}

Program parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("IoError", "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_program(ss.str());
}

Goal parse_goal(const Program& sig, const std::string& text, std::vector<Symbol>& free) {
  Parser ps(text);
  auto rg = ps.body();
  ps.expect(Tok::End, "end of goal");
  Program prog = sig;
  Elaborator el(prog, false);
  std::size_t nfree = free.size();
  for (Symbol v : free) el.bind(v->name, v->sort);
  auto ag = el.infer_goal(rg);
  el.finish();
  for (std::size_t i = 0; i < nfree; ++i) el.syms_[i] = free[i];
  for (std::size_t i = nfree; i < el.vars_.size(); ++i)
    if (el.is_global(i)) free.push_back(el.syms_[i]);
  return el.build_goal(ag);
}

Term parse_term(const Program& sig, const std::string& text, std::vector<Symbol>& free) {
  Parser ps(text);
  RTerm rt = ps.term();
  ps.expect(Tok::End, "end of term");
  Program prog = sig;
  Elaborator el(prog, false);
  std::size_t nfree = free.size();
  for (Symbol v : free) el.bind(v->name, v->sort);
  auto at = el.infer(rt).first;
  el.finish();
  for (std::size_t i = 0; i < nfree; ++i) el.syms_[i] = free[i];
  for (std::size_t i = nfree; i < el.vars_.size(); ++i) free.push_back(el.syms_[i]);
  return el.build(at);
}

std::string print_formula(const Goal& g) { return to_string(g); }

std::string print_program(const Program& p) {
  std::string out;
  for (Symbol c : p.constructors)
    if (c->name.empty() || c->name[0] != '"') out += "data " + c->name + " : " + to_string(c->sort) + ".\n";
  for (Symbol q : p.predicates) out += "pred " + q->name + " : " + to_string(q->sort) + ".\n";
  if (!p.clauses.empty() || p.goal) out += "\n";
  for (const auto& c : p.clauses) out += to_string(c) + "\n";
  if (p.goal) out += "?- " + to_string(*p.goal) + ".\n";
  return out;
}

}  // namespace homsl
