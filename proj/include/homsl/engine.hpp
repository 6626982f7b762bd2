#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "homsl/core.hpp"

namespace homsl {

// Closed automaton clauses, stored as goals "P c" or
// "forall xs. U => P (f xs)", indexed by predicate and head symbol.
class ClauseIndex {
 public:
  // Returns false when an identical clause is already present.
  bool add(const Goal& clause);
  bool contains(const Goal& clause) const;
  const std::vector<Goal>& clauses() const { return clauses_; }
  const std::vector<std::size_t>& with_pred(Symbol p) const;
  const std::vector<std::size_t>& with_pred_head(Symbol p, Symbol h) const;
  std::size_t size() const { return clauses_.size(); }

 private:
  std::vector<Goal> clauses_;
  std::unordered_set<std::string> keys_;
  std::unordered_map<Symbol, std::vector<std::size_t>> by_pred_;
  std::map<std::pair<Symbol, Symbol>, std::vector<std::size_t>> by_pred_head_;
};

struct EngineStats {
  std::size_t expanded = 0;
  std::size_t memo_hits = 0;
  std::size_t cuts = 0;
  std::size_t memo_size = 0;
};

std::size_t default_budget();  // HOMSL_BUDGET or 10^6

// Computes the automaton normal forms of goals relative to a fixed set of
// closed automaton clauses. Not thread safe; use one engine per thread.
class Engine {
 public:
  Engine(std::shared_ptr<const ClauseIndex> index, std::size_t budget = default_budget());
  ~Engine();

  // Each result is a canonical automaton formula about ybar; the goal is
  // equivalent (relative to the clauses) to their disjunction. Alternatives
  // subsumed by a smaller one are dropped.
  std::vector<Goal> normal_forms(const Goal& g, const std::vector<Symbol>& ybar);

  // Closed goal entailed by the clauses.
  bool holds(const Goal& g);

  const EngineStats& stats() const { return stats_; }
  const ClauseIndex& index() const { return *index_; }

 private:
  struct Impl;
  std::shared_ptr<const ClauseIndex> index_;
  std::size_t budget_;
  EngineStats stats_;
  std::unique_ptr<Impl> impl_;
};

}  // namespace homsl
