#include "homsl/proofs.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <sstream>
#include <unordered_map>

namespace homsl {

// ------------------------------------------------------------ checker

namespace {

std::string canon_key(const Goal& g) { return to_string(canonicalize_goal(g, 0)); }

CheckResult bad(const std::string& path, const std::string& why) { return {false, path, why}; }

CheckResult check_at(const Program& d, const ProofNode& n, const std::string& path) {
  if (!n.conclusion) return bad(path, "missing conclusion");
  auto child_path = [&](std::size_t i) { return path + "." + std::to_string(i); };
  switch (n.rule) {
    case ProofRule::T:
      if (n.conclusion->kind != GoalKind::True) return bad(path, "T must conclude true");
      if (!n.children.empty()) return bad(path, "T has premises");
      return {};
    case ProofRule::And: {
      if (n.conclusion->kind != GoalKind::And) return bad(path, "And must conclude a conjunction");
      std::vector<std::string> want, got;
      for (const auto& c : n.conclusion->conj) want.push_back(canon_key(c));
      for (const auto& c : n.children) {
        if (!c.conclusion) return bad(path, "premise without conclusion");
        got.push_back(canon_key(c.conclusion));
      }
      std::sort(want.begin(), want.end());
      std::sort(got.begin(), got.end());
      if (want != got) return bad(path, "premises do not match the conjuncts");
      break;
    }
    case ProofRule::Ex: {
      if (n.conclusion->kind != GoalKind::Exists) return bad(path, "Ex must conclude an existential");
      if (!n.witness) return bad(path, "Ex without witness");
      if (!is_closed(n.witness)) return bad(path, "witness is not closed");
      Sort ws;
      try {
        ws = sort_of({}, n.witness);
      } catch (const Error& e) {
        return bad(path, std::string("ill-sorted witness: ") + e.what());
      }
      if (ws != n.conclusion->var->sort) return bad(path, "witness has the wrong sort");
      if (n.children.size() != 1) return bad(path, "Ex needs exactly one premise");
      Subst s{{n.conclusion->var, n.witness}};
      if (canon_key(substitute(n.conclusion->body, s)) != canon_key(n.children[0].conclusion))
        return bad(path, "premise is not the instantiated body");
      break;
    }
    case ProofRule::Res: {
      if (n.conclusion->kind != GoalKind::Atom) return bad(path, "Res must conclude an atom");
      if (n.clause >= d.clauses.size()) return bad(path, "no clause " + std::to_string(n.clause + 1));
      const Clause& c = d.clauses[n.clause];
      if (n.subst.size() != c.binders.size()) return bad(path, "substitution has the wrong length");
      Subst s;
      for (std::size_t i = 0; i < c.binders.size(); ++i) {
        const Term& t = n.subst[i];
        if (!t || !is_closed(t)) return bad(path, "substitution term is not closed");
        Sort ts;
        try {
          ts = sort_of({}, t);
        } catch (const Error& e) {
          return bad(path, std::string("ill-sorted substitution: ") + e.what());
        }
        if (ts != c.binders[i]->sort) return bad(path, "substitution term for " + c.binders[i]->name + " has the wrong sort");
        s[c.binders[i]] = t;
      }
      if (!term_equal(substitute(c.head, s), n.conclusion->atom)) return bad(path, "clause head does not match");
      if (n.children.size() != 1) return bad(path, "Res needs exactly one premise");
      if (!n.children[0].conclusion || canon_key(substitute(c.body, s)) != canon_key(n.children[0].conclusion))
        return bad(path, "premise is not the instantiated clause body");
      break;
    }
  }
  for (std::size_t i = 0; i < n.children.size(); ++i) {
    CheckResult r = check_at(d, n.children[i], child_path(i));
    if (!r.valid) return r;
  }
  return {};
}

}  // namespace

CheckResult check(const Program& d, const ProofNode& pf) { return check_at(d, pf, "root"); }

// ------------------------------------------------------------ terms

namespace {

struct TermEnum {
  std::vector<Symbol> syms;
  std::map<std::pair<Sort, std::size_t>, std::vector<Term>> memo;
  std::size_t cap;

  TermEnum(const Program& d, std::size_t c) : cap(c) {
    syms = d.constructors;
    syms.insert(syms.end(), d.predicates.begin(), d.predicates.end());
    std::sort(syms.begin(), syms.end(), [](Symbol a, Symbol b) { return a->name < b->name; });
  }

  const std::vector<Term>& exact(Sort s, std::size_t n) {
    auto key = std::make_pair(s, n);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    std::vector<Term> out;
    if (n >= 1) {
      for (Symbol h : syms) {
        auto as = arg_sorts(h->sort);
        for (std::size_t j = 0; j <= as.size() && j + 1 <= n; ++j) {
          if (apply_sort(h->sort, j) != s) continue;
          if (j == 0) {
            if (n == 1) out.push_back(mk(h));
            continue;
          }
          std::vector<std::size_t> parts(j, 1);
          std::size_t rest = n - 1 - j;
          // enumerate compositions of n-1 into j positive parts
          std::function<void(std::size_t, std::size_t)> place = [&](std::size_t i, std::size_t left) {
            if (out.size() >= cap) return;
            if (i + 1 == j) {
              parts[i] = 1 + left;
              std::vector<const std::vector<Term>*> pools;
              for (std::size_t k = 0; k < j; ++k) pools.push_back(&exact(as[k], parts[k]));
              std::vector<Term> args(j);
              std::function<void(std::size_t)> pick = [&](std::size_t k) {
                if (out.size() >= cap) return;
                if (k == j) {
                  out.push_back(mk(h, args));
                  return;
                }
                for (const auto& t : *pools[k]) {
                  args[k] = t;
                  pick(k + 1);
                }
              };
              pick(0);
              return;
            }
            for (std::size_t a = 0; a <= left; ++a) {
              parts[i] = 1 + a;
              place(i + 1, left - a);
            }
          };
          place(0, rest);
        }
      }
    }
    std::sort(out.begin(), out.end(), [](const Term& a, const Term& b) { return compare_terms(a, b) < 0; });
    return memo.emplace(key, std::move(out)).first->second;
  }

  std::vector<Term> upto(Sort s, std::size_t max_size) {
    std::vector<Term> out;
    for (std::size_t n = 1; n <= max_size && out.size() < cap; ++n)
      for (const auto& t : exact(s, n)) {
        if (out.size() >= cap) break;
        out.push_back(t);
      }
    return out;
  }
};

bool match(const Term& pat, const Term& t, Subst& s) {
  if (pat->head->kind == SymKind::Variable && pat->args.empty()) {
    if (auto it = s.find(pat->head); it != s.end()) return term_equal(it->second, t);
    s[pat->head] = t;
    return true;
  }
  if (pat->head != t->head || pat->args.size() != t->args.size()) return false;
  for (std::size_t i = 0; i < pat->args.size(); ++i)
    if (!match(pat->args[i], t->args[i], s)) return false;
  return true;
}

struct Searcher {
  const Program& d;
  std::size_t term_size;
  std::function<bool(const Goal&)> oracle;  // optional pruning
  TermEnum terms;
  std::unordered_map<std::string, int> failed;  // atom -> deepest failed budget
  std::size_t visits = 0;
  std::size_t visit_cap = 5000000;

  Searcher(const Program& p, std::size_t ts) : d(p), term_size(ts), terms(p, 100000) {}

  bool plausible(const Goal& g) { return !oracle || has_exists(g) || oracle(g); }

  std::optional<ProofNode> prove(const Goal& g, int depth) {
    if (++visits > visit_cap) return std::nullopt;
    ProofNode n;
    n.conclusion = g;
    switch (g->kind) {
      case GoalKind::True: n.rule = ProofRule::T; return n;
      case GoalKind::And:
        n.rule = ProofRule::And;
        for (const auto& c : g->conj) {
          auto p = prove(c, depth);
          if (!p) return std::nullopt;
          n.children.push_back(std::move(*p));
        }
        return n;
      case GoalKind::Exists: {
        n.rule = ProofRule::Ex;
        for (const auto& t : terms.upto(g->var->sort, term_size)) {
          Goal inst = substitute(g->body, Subst{{g->var, t}});
          if (!plausible(inst)) continue;
          if (auto p = prove(inst, depth)) {
            n.witness = t;
            n.children.push_back(std::move(*p));
            return n;
          }
        }
        return std::nullopt;
      }
      case GoalKind::Imp: return std::nullopt;
      case GoalKind::Atom: break;
    }
    if (depth <= 0) return std::nullopt;
    std::string key = to_string(g->atom);
    if (auto it = failed.find(key); it != failed.end() && it->second >= depth) return std::nullopt;
    if (oracle && !oracle(g)) {
      failed[key] = INT32_MAX;
      return std::nullopt;
    }
    n.rule = ProofRule::Res;
    for (std::size_t i = 0; i < d.clauses.size(); ++i) {
      const Clause& c = d.clauses[i];
      Subst s;
      if (!match(c.head, g->atom, s)) continue;
      bool complete = true;
      for (Symbol b : c.binders) complete = complete && s.count(b);
      if (!complete) continue;
      Goal body = substitute(c.body, s);
      if (!plausible(body)) continue;
      if (auto p = prove(body, depth - 1)) {
        n.clause = i;
        for (Symbol b : c.binders) n.subst.push_back(s[b]);
        n.children.push_back(std::move(*p));
        return n;
      }
    }
    int& f = failed[key];
    f = std::max(f, depth);
    return std::nullopt;
  }
};

}  // namespace

std::vector<Term> closed_terms(const Program& d, Sort s, std::size_t max_size, std::size_t cap) {
  TermEnum e(d, cap);
  return e.upto(s, max_size);
}

std::optional<ProofNode> brute_force(const Program& d, const Goal& g, int depth, int term_size) {
  Searcher s(d, static_cast<std::size_t>(std::max(term_size, 0)));
  return s.prove(g, depth);
}

// ------------------------------------------------------------ reconstruction

namespace {

std::optional<ProofNode> guided(const Program& d, const Goal& g, const std::function<bool(const Goal&)>& oracle) {
  for (int depth = 1; depth <= 512; depth *= 2) {
    Searcher s(d, 8);
    s.oracle = oracle;
    if (auto p = s.prove(g, depth)) return p;
  }
  return std::nullopt;
}

}  // namespace

const Program& proof_program(const Verdict& v, const Reconstruction& r) {
  return r.over_reduced ? v.reduction.result : v.reduction.adequate;
}

Reconstruction reconstruct_proof(const Program& input, Verdict& v, const DecideOptions& opts) {
  Reconstruction out;
  if (!v.provable || !input.goal) return out;
  if (!v.solved.complete) {
    SaturateOptions so;
    so.budget = opts.budget;
    so.jobs = opts.jobs;
    so.warm = &v.solved;
    v.solved = saturate(v.reduction.result, so);
  }
  auto idx = std::make_shared<const ClauseIndex>(*v.solved.index);
  Engine engine(idx, opts.budget);
  std::unordered_map<std::string, bool> memo;
  auto oracle_for = [&](bool reduced) {
    return [&, reduced](const Goal& g) {
      std::string k = (reduced ? "r:" : "o:") + to_string(g);
      if (auto it = memo.find(k); it != memo.end()) return it->second;
      bool r = engine.holds(reduced ? g : translate_goal(v.reduction, g));
      memo.emplace(k, r);
      return r;
    };
  };
  const Program& src = v.reduction.adequate;
  Goal g0 = src.goal ? *src.goal : *input.goal;
  if (auto p = guided(src, g0, oracle_for(false))) {
    out.proof = std::move(p);
    return out;
  }
  if (v.reduction.reduced) {
    if (auto p = guided(v.reduction.result, *v.reduction.result.goal, oracle_for(true))) {
      out.proof = std::move(p);
      out.over_reduced = true;
      out.note = "proof refers to the reduced program";
      return out;
    }
  }
  out.note = "no proof found within the search limits";
  return out;
}

// ------------------------------------------------------------ text

namespace {

void format_at(const ProofNode& n, int indent, std::ostringstream& os) {
  os << std::string(static_cast<std::size_t>(indent) * 2, ' ');
  switch (n.rule) {
    case ProofRule::T: os << "T"; break;
    case ProofRule::And: os << "And"; break;
    case ProofRule::Ex: os << "Ex [" << to_string(n.witness) << "]"; break;
    case ProofRule::Res: {
      os << "Res (" << n.clause + 1 << ")";
      if (!n.subst.empty()) {
        os << " [";
        for (std::size_t i = 0; i < n.subst.size(); ++i) os << (i ? ", " : "") << to_string(n.subst[i]);
        os << "]";
      }
      break;
    }
  }
  os << " : " << to_string(n.conclusion) << "\n";
  for (const auto& c : n.children) format_at(c, indent + 1, os);
}

}  // namespace

std::string format_proof(const ProofNode& pf) {
  std::ostringstream os;
  format_at(pf, 0, os);
  return os.str();
}

std::size_t proof_size(const ProofNode& pf) {
  std::size_t n = 1;
  for (const auto& c : pf.children) n += proof_size(c);
  return n;
}

}  // namespace homsl
