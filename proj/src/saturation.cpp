#include "homsl/saturation.hpp"

#include <thread>

#include "homsl/automaton.hpp"

namespace homsl {

namespace {

void require_saturable(const Program& d) {
  Sort io = arrow(iota(), omicron());
  for (Symbol q : d.predicates)
    if (q->sort != io) throw Error("NotReduced", "predicate " + q->name + " is not of sort i -> o");
  for (const auto& c : d.clauses) {
    if (has_exists(c.body)) throw Error("NotReduced", "existential in clause " + to_string(c));
    if (c.head->args.size() != 1 || c.head->args[0]->head->kind != SymKind::Constructor)
      throw Error("NotReduced", "clause head is not P (f ys): " + to_string(c));
  }
}

Goal make_clause(const Clause& src, const Goal& u) {
  if (src.binders.empty() && u->kind == GoalKind::True) return g_atom(src.head);
  return canonicalize_goal(g_imp(src.binders, u, g_atom(src.head)), 0);
}

void add_stats(EngineStats& into, const EngineStats& s) {
  into.expanded += s.expanded;
  into.memo_hits += s.memo_hits;
  into.cuts += s.cuts;
  into.memo_size += s.memo_size;
}

}  // namespace

SolvedForm saturate(const Program& d, const SaturateOptions& opts) {
  require_saturable(d);
  std::vector<Clause> src;
  for (const auto& c : d.clauses) src.push_back(canonicalize_clause(c));

  SolvedForm out;
  out.index = std::make_shared<ClauseIndex>();
  if (opts.warm) {
    for (const auto& sc : opts.warm->clauses)
      if (out.index->add(sc.clause)) out.clauses.push_back(sc);
  }
  unsigned jobs = std::max(1u, opts.jobs);

  for (std::size_t round = 1;; ++round) {
    auto snap = std::make_shared<const ClauseIndex>(*out.index);
    std::vector<std::vector<Goal>> nfs(src.size());
    std::vector<EngineStats> stats(jobs);
    std::vector<std::exception_ptr> errors(jobs);
    auto work = [&](unsigned t) {
      try {
        Engine e(snap, opts.budget);
        for (std::size_t i = t; i < src.size(); i += jobs) nfs[i] = e.normal_forms(src[i].body, src[i].binders);
        stats[t] = e.stats();
      } catch (...) {
        errors[t] = std::current_exception();
      }
    };
    if (jobs == 1) {
      work(0);
    } else {
      std::vector<std::thread> ts;
      for (unsigned t = 0; t < jobs; ++t) ts.emplace_back(work, t);
      for (auto& th : ts) th.join();
    }
    for (auto& ep : errors)
      if (ep) std::rethrow_exception(ep);
    for (const auto& s : stats) add_stats(out.stats, s);

    bool grew = false;
    for (std::size_t i = 0; i < src.size(); ++i)
      for (const auto& u : nfs[i]) {
        Goal c = make_clause(src[i], u);
        if (out.index->add(c)) {
          out.clauses.push_back({out.index->clauses().back(), i, round});
          grew = true;
        }
      }
    out.rounds = round;
    if (!grew) break;
    if (opts.stop_goal) {
      Engine e(std::make_shared<const ClauseIndex>(*out.index), opts.budget);
      if (e.holds(*opts.stop_goal)) {
        out.complete = false;
        break;
      }
    }
  }
  return out;
}

Verdict decide(const Program& p, const DecideOptions& opts) {
  if (!p.goal) throw Error("MissingGoal", "program has no goal");
  Verdict v;
  v.reduction = reduce_with_maps(p);
  const Program& r = v.reduction.result;
  v.goal = *r.goal;
  if (v.goal->kind == GoalKind::True) {
    v.provable = true;
    v.solved.index = std::make_shared<ClauseIndex>();
    if (!opts.full) return v;
  }
  SaturateOptions so;
  so.budget = opts.budget;
  so.jobs = opts.jobs;
  if (!opts.full) so.stop_goal = v.goal;
  v.solved = saturate(r, so);
  Engine e(std::make_shared<const ClauseIndex>(*v.solved.index), opts.budget);
  v.provable = e.holds(v.goal);
  return v;
}

Entailment entailment_modes(const Program& p, const DecideOptions& opts) {
  return decide(p, opts).provable ? Entailment::Entails : Entailment::SatisfiableNegation;
}

std::string to_string(Entailment e) { return e == Entailment::Entails ? "entails" : "satisfiable-negation"; }

Program solved_program(const Program& reduced, const SolvedForm& s) {
  Program out;
  out.constructors = reduced.constructors;
  out.predicates = reduced.predicates;
  for (const auto& c : s.clauses) out.clauses.push_back(canonicalize_clause(goal_as_clause(c.clause)));
  return out;
}

}  // namespace homsl
