#include "homsl/protocol.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>

namespace homsl {

namespace {

// ------------------------------------------------------------- lexing

struct Tok {
  enum Kind { Word, Str, Paren, LBrace, RBrace, Nl, End } kind;
  std::string text;
  int line;
};

std::vector<Tok> lex(const std::string& src) {
  std::vector<Tok> out;
  int line = 1;
  std::size_t i = 0;
  auto err = [&](const std::string& m) { throw Error("ParseError", "line " + std::to_string(line) + ": " + m); };
  while (i < src.size()) {
    char c = src[i];
    if (c == '\n' || c == ';') {
      out.push_back({Tok::Nl, "", line});
      if (c == '\n') ++line;
      ++i;
    } else if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (c == '%' || src.compare(i, 2, "--") == 0) {
      while (i < src.size() && src[i] != '\n') ++i;
    } else if (c == '{' || c == '}') {
      out.push_back({c == '{' ? Tok::LBrace : Tok::RBrace, std::string(1, c), line});
      ++i;
    } else if (c == '"') {
      std::size_t b = i++;
      while (i < src.size() && src[i] != '"' && src[i] != '\n') ++i;
      if (i >= src.size() || src[i] != '"') err("unterminated string");
      ++i;
      out.push_back({Tok::Str, src.substr(b, i - b), line});
    } else if (c == '(') {
      std::size_t b = i;
      int d = 0;
      bool in_str = false;
      for (; i < src.size(); ++i) {
        if (src[i] == '\n') err("unbalanced parenthesis");
        if (src[i] == '"') in_str = !in_str;
        if (in_str) continue;
        if (src[i] == '(') ++d;
        if (src[i] == ')' && --d == 0) break;
      }
      if (i >= src.size()) err("unbalanced parenthesis");
      ++i;
      out.push_back({Tok::Paren, src.substr(b, i - b), line});
    } else {
      std::size_t b = i;
      while (i < src.size() && !std::isspace(static_cast<unsigned char>(src[i])) &&
             std::string("{};\"(").find(src[i]) == std::string::npos)
        ++i;
      out.push_back({Tok::Word, src.substr(b, i - b), line});
    }
  }
  out.push_back({Tok::End, "", line});
  return out;
}

const std::vector<std::string> kOps{"bind", "connect", "listen", "send", "receive", "close"};

bool is_op(const std::string& w) { return std::find(kOps.begin(), kOps.end(), w) != kOps.end(); }

struct ScriptParser {
  std::vector<Tok> toks;
  std::size_t pos = 0;

  const Tok& peek() const { return toks[pos]; }
  [[noreturn]] void fail(const std::string& m) const {
    throw Error("ParseError", "line " + std::to_string(peek().line) + ": " + m);
  }
  void skip_nl() {
    while (peek().kind == Tok::Nl) ++pos;
  }
  // Words and literals up to the end of the statement.
  std::vector<Tok> words() {
    std::vector<Tok> ws;
    while (peek().kind == Tok::Word || peek().kind == Tok::Str || peek().kind == Tok::Paren) ws.push_back(toks[pos++]);
    return ws;
  }
  std::vector<Stmt> braced() {
    skip_nl();
    if (peek().kind != Tok::LBrace) fail("expected '{'");
    ++pos;
    auto b = block();
    if (peek().kind != Tok::RBrace) fail("expected '}'");
    ++pos;
    return b;
  }
  std::vector<Stmt> block() {
    std::vector<Stmt> out;
    for (;;) {
      skip_nl();
      if (peek().kind == Tok::RBrace || peek().kind == Tok::End) return out;
      auto s = statement();
      if (s) out.push_back(std::move(*s));
    }
  }

  std::optional<Stmt> statement() {
    int line = peek().line;
    auto ws = words();
    if (ws.empty()) fail("expected a statement");
    auto w = [&](std::size_t i) { return i < ws.size() ? ws[i].text : std::string(); };
    Stmt s;
    s.line = line;
    if (w(0) == "main" && w(1) == "=") return std::nullopt;

    std::string bound;
    std::size_t at = 0;
    if (w(0) == "let" && w(2) == "=") {
      bound = w(1);
      at = 3;
    } else if (w(1) == "<-") {
      bound = w(0);
      at = 2;
    }
    std::string head = w(at);
    if (head == "socket") {
      s.kind = Stmt::Kind::Socket;
      s.name = bound;
    } else if (head == "accept") {
      if (ws.size() < at + 2) fail("accept needs a socket");
      s.kind = Stmt::Kind::Accept;
      s.sock = w(at + 1);
      s.name = bound;
    } else if (is_op(head)) {
      if (ws.size() < at + 2) fail(head + " needs a socket");
      s.kind = Stmt::Kind::Op;
      s.op = head;
      s.sock = w(at + 1);
    } else if (!bound.empty()) {
      fail("cannot bind the result of '" + head + "'");
    } else if (head == "pure" || head == "return") {
      s.kind = Stmt::Kind::Pure;
    } else if (head == "forever") {
      s.kind = Stmt::Kind::Forever;
      s.body = braced();
    } else if (head == "loop") {
      if (ws.size() != 2) fail("expected 'loop LABEL {'");
      s.kind = Stmt::Kind::Loop;
      s.name = w(1);
      s.body = braced();
    } else if (head == "branch") {
      s.kind = Stmt::Kind::Branch;
      s.body = braced();
      s.alt = braced();
    } else if (ws.size() == 1 || (ws.size() == 2 && w(1) == "()")) {
      s.kind = Stmt::Kind::Continue;
      s.name = head;
    } else {
      fail("unknown statement '" + head + "'");
    }
    if (peek().kind == Tok::LBrace) fail("unexpected '{'");
    return s;
  }
};

// ----------------------------------------------------------- signature

Sort io() { return arrow(iota(), omicron()); }
Sort k1() { return arrow(iota(), iota()); }

Symbol P(const std::string& n) { return pred(n, io()); }
Symbol op_con(const std::string& n) {
  if (n == "socket") return con(n, arrow(k1(), iota()));
  if (n == "accept") return con(n, arrows({k1(), iota()}, iota()));
  return con(n, arrows({iota(), iota()}, iota()));
}
Term lab(const char* n) { return mk(con(n, iota())); }

Clause make(Symbol q, const std::string& op, Symbol k, Symbol x, std::vector<Goal> body) {
  std::vector<Symbol> bs{k};
  std::vector<Term> args{mk(k)};
  if (x) {
    bs.push_back(x);
    args.push_back(mk(x));
  }
  return {bs, g_and(std::move(body)), mk(q, {mk(op_con(op), args)})};
}

Goal at(const std::string& q, const Term& t) { return g_atom(mk(P(q), {t})); }

}  // namespace

SocketScript parse_script(const std::string& text) {
  ScriptParser p{lex(text)};
  SocketScript s;
  s.stmts = p.block();
  if (p.peek().kind != Tok::End) p.fail("unmatched '}'");
  return s;
}

const std::vector<std::string>& protocol_states() {
  static const std::vector<std::string> q{"Ready", "Bound", "Listening", "Open", "Close", "Untracked"};
  return q;
}

std::vector<Clause> label_clauses() {
  return {{{}, g_true(), mk(P("IsTracked"), {lab("s")})}, {{}, g_true(), mk(P("IsUntracked"), {lab("u")})}};
}

std::vector<Clause> protocol_clauses() {
  Symbol k = var("k", iota()), kf = var("k", k1()), x = var("x", iota());
  Term s = lab("s"), u = lab("u");
  Goal tracked = g_atom(mk(P("IsTracked"), {mk(x)}));
  Goal untracked = g_atom(mk(P("IsUntracked"), {mk(x)}));
  Symbol U = P("Untracked");
  std::vector<Clause> out;

  out.push_back(make(U, "socket", kf, nullptr, {at("Ready", app(mk(kf), s))}));
  out.push_back(make(U, "socket", kf, nullptr, {at("Untracked", app(mk(kf), u))}));
  for (const char* op : {"bind", "connect", "listen"}) out.push_back(make(U, op, k, x, {untracked, at("Untracked", mk(k))}));
  out.push_back(make(U, "accept", kf, x, {untracked, at("Open", app(mk(kf), s))}));
  out.push_back(make(U, "accept", kf, x, {untracked, at("Untracked", app(mk(kf), u))}));
  for (const char* op : {"close", "send", "receive"}) out.push_back(make(U, op, k, x, {untracked, at("Untracked", mk(k))}));

  // Tracked socket: allowed transitions, anything else is a violation.
  const std::map<std::pair<std::string, std::string>, std::string> next{
      {{"Ready", "bind"}, "Bound"},        {{"Ready", "connect"}, "Open"}, {{"Bound", "listen"}, "Listening"},
      {{"Listening", "accept"}, "Listening"}, {{"Open", "close"}, "Close"}, {{"Open", "send"}, "Open"},
      {{"Open", "receive"}, "Open"}};
  for (const auto& q : protocol_states()) {
    if (q == "Untracked") continue;
    for (const char* op : {"bind", "connect", "listen", "accept", "close", "send", "receive"}) {
      std::string o = op;
      auto it = next.find({q, o});
      bool acc = o == "accept";
      std::vector<Goal> body{tracked};
      if (it != next.end()) body.push_back(acc ? at(it->second, app(mk(kf), u)) : at(it->second, mk(k)));
      out.push_back(make(P(q), o, acc ? kf : k, x, body));
    }
  }

  // Operations on untracked sockets leave a tracked state unchanged.
  for (const auto& q : protocol_states()) {
    if (q == "Untracked") continue;
    out.push_back(make(P(q), "socket", kf, nullptr, {at(q, app(mk(kf), u))}));
    for (const char* op : {"bind", "connect", "listen", "accept", "close", "send", "receive"}) {
      bool acc = std::string(op) == "accept";
      out.push_back(make(P(q), op, acc ? kf : k, x, {untracked, acc ? at(q, app(mk(kf), u)) : at(q, mk(k))}));
    }
  }
  for (auto& c : out) c = canonicalize_clause(c);
  return out;
}

Program protocol_signature() {
  Program p;
  for (const char* c : {"s", "u", "done"}) p.constructors.push_back(con(c, iota()));
  for (const char* op : {"socket", "bind", "connect", "listen", "accept", "close", "send", "receive"})
    p.constructors.push_back(op_con(op));
  for (const auto& q : protocol_states()) p.predicates.push_back(P(q));
  p.predicates.push_back(P("IsTracked"));
  p.predicates.push_back(P("IsUntracked"));
  return p;
}

namespace {

struct Compiler {
  Program prog;
  std::map<std::string, int> counters;

  using Env = std::vector<std::pair<std::string, Symbol>>;
  using Loops = std::map<std::string, Term>;

  Symbol fresh_con(const std::string& stem, std::size_t arity, bool takes_socket) {
    std::string n = stem + std::to_string(++counters[stem]);
    std::vector<Sort> as(arity + (takes_socket ? 1 : 0), iota());
    Symbol c = con(n, arrows(as, iota()));
    prog.constructors.push_back(c);
    return c;
  }
  static std::vector<Symbol> vars_of(const Env& env) {
    std::vector<Symbol> vs;
    for (const auto& [n, v] : env)
      if (std::find(vs.begin(), vs.end(), v) == vs.end()) vs.push_back(v);
    return vs;
  }
  // q (head) <= q (body) for every state.
  void unfold(const std::vector<Symbol>& binders, const Term& head, const Term& body) {
    for (const auto& q : protocol_states())
      prog.clauses.push_back(canonicalize_clause({binders, at(q, body), mk(P(q), {head})}));
  }
  static Symbol lookup(const Env& env, const Stmt& s) {
    for (auto it = env.rbegin(); it != env.rend(); ++it)
      if (it->first == s.sock) return it->second;
    throw Error("UnboundSocket", "line " + std::to_string(s.line) + ": socket '" + s.sock + "' is not bound");
  }

  Term seq(const std::vector<Stmt>& ss, std::size_t i, const Term& cont, const Env& env, const Loops& loops) {
    if (i == ss.size()) return cont;
    const Stmt& s = ss[i];
    auto vs = vars_of(env);
    switch (s.kind) {
      case Stmt::Kind::Pure: return seq(ss, i + 1, cont, env, loops);
      case Stmt::Kind::Op: {
        Symbol x = lookup(env, s);
        return mk(op_con(s.op), {seq(ss, i + 1, cont, env, loops), mk(x)});
      }
      case Stmt::Kind::Socket:
      case Stmt::Kind::Accept: {
        Symbol target = s.kind == Stmt::Kind::Accept ? lookup(env, s) : nullptr;
        Symbol lam = fresh_con("lam", vs.size(), true);
        Symbol x = fresh_var(iota(), "_s");
        Env inner = env;
        inner.emplace_back(s.name, x);
        Term body = seq(ss, i + 1, cont, inner, loops);
        std::vector<Symbol> bs = vs;
        bs.push_back(x);
        unfold(bs, mk(lam, var_terms(bs)), body);
        Term k = mk(lam, var_terms(vs));
        if (target) return mk(op_con("accept"), {k, mk(target)});
        return mk(op_con("socket"), {k});
      }
      case Stmt::Kind::Forever: {
        Term l = mk(fresh_con("loop", vs.size(), false), var_terms(vs));
        unfold(vs, l, seq(s.body, 0, l, env, loops));
        return l;
      }
      case Stmt::Kind::Loop: {
        Term e = mk(fresh_con("exit", vs.size(), false), var_terms(vs));
        unfold(vs, e, seq(ss, i + 1, cont, env, loops));
        Term l = mk(fresh_con("loop", vs.size(), false), var_terms(vs));
        Loops inner = loops;
        inner[s.name] = l;
        unfold(vs, l, seq(s.body, 0, e, env, inner));
        return l;
      }
      case Stmt::Kind::Continue: {
        auto it = loops.find(s.name);
        if (it == loops.end())
          throw Error("MalformedLoop", "line " + std::to_string(s.line) + ": '" + s.name + "' is not an enclosing loop");
        if (i + 1 != ss.size())
          throw Error("MalformedLoop", "line " + std::to_string(s.line) + ": statements after '" + s.name + "'");
        // Sockets bound inside the loop body are out of scope at its start.
        return it->second;
      }
      case Stmt::Kind::Branch: {
        Term j = mk(fresh_con("join", vs.size(), false), var_terms(vs));
        unfold(vs, j, seq(ss, i + 1, cont, env, loops));
        Term b = mk(fresh_con("br", vs.size(), false), var_terms(vs));
        unfold(vs, b, seq(s.body, 0, j, env, loops));
        unfold(vs, b, seq(s.alt, 0, j, env, loops));
        return b;
      }
    }
    return cont;
  }
};

}  // namespace

Program compile_script(const SocketScript& script) {
  Compiler c;
  c.prog = protocol_signature();
  Symbol main = con("main", iota());
  c.prog.constructors.push_back(main);
  Term body = c.seq(script.stmts, 0, mk(con("done", iota())), {}, {});
  c.unfold({}, mk(main), body);
  for (const auto& cl : label_clauses()) c.prog.clauses.push_back(cl);
  for (const auto& cl : protocol_clauses()) c.prog.clauses.push_back(cl);
  c.prog.goal = at("Untracked", mk(main));
  return check_program(c.prog);
}

}  // namespace homsl
