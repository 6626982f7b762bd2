#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "homsl/core.hpp"
#include "homsl/engine.hpp"
#include "homsl/reductions.hpp"

namespace homsl {

struct SolvedClause {
  Goal clause;             // canonical closed automaton clause
  std::size_t source = 0;  // index of the program clause it was derived from
  std::size_t round = 0;   // 1-based saturation round
};

struct SolvedForm {
  std::vector<SolvedClause> clauses;
  std::shared_ptr<ClauseIndex> index;
  std::size_t rounds = 0;
  bool complete = true;  // false when stopped early because the goal held
  EngineStats stats;
};

struct SaturateOptions {
  std::size_t budget = default_budget();
  unsigned jobs = 1;
  std::optional<Goal> stop_goal;  // stop as soon as this closed goal holds
  const SolvedForm* warm = nullptr;
};

// Least set of automaton clauses closed under normalising source bodies.
// Requires an existential-free program with monadic i -> o predicates.
SolvedForm saturate(const Program& d, const SaturateOptions& opts = {});

struct DecideOptions {
  std::size_t budget = default_budget();
  unsigned jobs = 1;
  bool full = false;  // saturate completely even after the goal holds
};

struct Verdict {
  bool provable = false;
  Reduction reduction;
  Goal goal;  // the goal as checked against the solved form
  SolvedForm solved;
};

Verdict decide(const Program& p, const DecideOptions& opts = {});

enum class Entailment { Entails, SatisfiableNegation };
Entailment entailment_modes(const Program& p, const DecideOptions& opts = {});
std::string to_string(Entailment e);

// The solved form as a re-parseable program over the reduced signature.
Program solved_program(const Program& reduced, const SolvedForm& s);

}  // namespace homsl
