#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "homsl/core.hpp"

namespace homsl {

struct StrictType;
using StrictPtr = std::shared_ptr<const StrictType>;

// Intersection of strict types; the empty intersection is top. Parts are
// kept sorted by key and deduplicated, so equal types have equal keys.
struct IType {
  std::vector<StrictPtr> parts;
  bool is_top() const { return parts.empty(); }
};

// args[0] -> ... -> args[m-1] -> q_base. Base types are named by predicates.
struct StrictType {
  std::vector<IType> args;
  Symbol base = nullptr;
  std::string key;
};

IType top_type();
StrictPtr strict_type(std::vector<IType> args, Symbol base);
IType inter(std::vector<StrictPtr> parts);
IType inter(const IType& a, const IType& b);
IType single(StrictPtr t);

std::string to_string(const StrictType& t);
std::string to_string(const IType& t);
bool type_equal(const IType& a, const IType& b);

// Checks the type against a constructor sort; throws SortMismatch.
void check_type(const IType& t, Sort s);
bool well_typed(const IType& t, Sort s);

// Type syntax: "top", base names, "/\" (binds tightest), "->", parentheses.
IType parse_type(const std::string& text, const std::function<Symbol(const std::string&)>& base);

// Type of the conjuncts of an automaton formula about `subject`.
IType clause_to_type(const Goal& u, Symbol subject);
// Same for a closed automaton formula whose conjuncts share one subject.
IType clause_to_type(const Goal& clause);

// Automaton formula asserting the type of `subject` (a variable or
// constructor term); canonical at the given binder depth.
Goal type_to_clause(const IType& t, const Term& subject, int depth = 0);

bool subtype(const StrictType& a, const StrictType& b);
bool subtype(const IType& a, const IType& b);

// Clause-level order: every variable's type in u1 is below its type in u2.
bool leqa(const Goal& u1, const Goal& u2, const std::vector<Symbol>& vars);

struct SymbolNameLess {
  bool operator()(Symbol a, Symbol b) const { return a->name < b->name; }
};
using TypeEnv = std::map<Symbol, IType, SymbolNameLess>;

// Environment of a closed automaton formula and back.
TypeEnv env_of(const Goal& v);
Goal formula_of(const TypeEnv& env);

// Saturates d and reads one type per constructor off the solved form.
TypeEnv typing_algorithm(const Program& d);

std::string to_string(const TypeEnv& env);

}  // namespace homsl
