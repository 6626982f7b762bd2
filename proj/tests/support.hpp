#pragma once

#include <random>
#include <string>
#include <vector>

#include "homsl/core.hpp"
#include "homsl/protocol.hpp"
#include "homsl/types_bridge.hpp"

namespace homsl::testing {

std::string corpus_path(const std::string& name);
std::string read_text(const std::string& path);

// Random well-typed term of sort s over the given symbols; depth bounds
// nesting of applications.
Term random_term(std::mt19937& rng, const std::vector<Symbol>& syms, Sort s, int depth);

// Existential-free MSL(omega) program: at most 2 predicates, constructors of
// order <= 2 and arity <= 2, at most max_clauses clauses, and a closed goal.
Program random_msl(std::mt19937& rng, int max_clauses = 5);

// Program with a higher-order predicate R : (i -> o) -> i -> o.
Program random_homsl(std::mt19937& rng, int max_clauses = 6);

// Closed automaton clause about a constructor of order <= 2, built directly
// from the clause grammar (no types involved).
Goal random_automaton_clause(std::mt19937& rng, const std::vector<Symbol>& preds, Symbol con);

// Random intersection type at sort s.
IType random_type(std::mt19937& rng, const std::vector<Symbol>& preds, Sort s, int max_parts = 2);

// Least relation on a finite set of intersection types closed under the six
// subtyping rules, computed by exhaustive rule application.
class SubtypeClosure {
 public:
  explicit SubtypeClosure(const std::vector<IType>& seeds);
  bool leq(const IType& a, const IType& b) const;
  std::size_t universe_size() const { return strict_.size(); }
  std::size_t domain_size() const { return dom_.size(); }

 private:
  std::size_t id(const IType& t) const;
  std::vector<IType> dom_;
  std::vector<std::string> keys_;
  std::vector<StrictPtr> strict_;
  std::vector<std::vector<char>> rel_;
};

// Explicit-state exploration of all tracking choices and branches; true
// when some run performs an operation the protocol forbids.
bool simulate_violation(const SocketScript& s);

// Script over at most two sockets with nested loops and branches.
SocketScript random_script(std::mt19937& rng);
std::string print_script(const SocketScript& s);

}  // namespace homsl::testing
