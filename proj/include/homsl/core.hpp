#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace homsl {

class Error : public std::runtime_error {
public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

private:
  std::string code_;
};

// ---------------------------------------------------------------- sorts

struct SortNode {
  enum class Kind { Iota, Omicron, Arrow };
  Kind kind;
  const SortNode* left = nullptr;
  const SortNode* right = nullptr;
};
using Sort = const SortNode*;

// Sorts are hash-consed, so pointer equality is structural equality.
Sort iota();
Sort omicron();
Sort arrow(Sort a, Sort b);
Sort arrows(const std::vector<Sort>& args, Sort result);

std::vector<Sort> arg_sorts(Sort s);
Sort tail_sort(Sort s);
// Result sort after applying n arguments; nullptr if s has fewer.
Sort apply_sort(Sort s, std::size_t n);

int order_of(Sort s);
bool is_constructor_sort(Sort s);
bool is_predicate_sort(Sort s);
int compare_sorts(Sort a, Sort b);
std::string to_string(Sort s);
// Compact identifier-safe code: i, o, F<a><b>.
std::string sort_code(Sort s);

// -------------------------------------------------------------- symbols

enum class SymKind { Constructor, Predicate, Variable };

struct SymbolData {
  std::string name;
  SymKind kind;
  Sort sort;
};
using Symbol = const SymbolData*;

Symbol symbol(const std::string& name, SymKind kind, Sort sort);
inline Symbol var(const std::string& name, Sort s) { return symbol(name, SymKind::Variable, s); }
inline Symbol con(const std::string& name, Sort s) { return symbol(name, SymKind::Constructor, s); }
inline Symbol pred(const std::string& name, Sort s) { return symbol(name, SymKind::Predicate, s); }
Symbol fresh_var(Sort s, const std::string& stem = "_v");

// ---------------------------------------------------------------- terms

struct TermNode;
using Term = std::shared_ptr<const TermNode>;

// Spine form: head applied to args.
struct TermNode {
  Symbol head;
  std::vector<Term> args;
  std::size_t hash;
};

Term mk(Symbol head, std::vector<Term> args = {});
Term app(const Term& f, const std::vector<Term>& more);
inline Term app(const Term& f, const Term& a) { return app(f, std::vector<Term>{a}); }
std::vector<Term> var_terms(const std::vector<Symbol>& vs);

bool term_equal(const Term& a, const Term& b);
int compare_terms(const Term& a, const Term& b);
int depth(const Term& t);
std::size_t term_size(const Term& t);
bool is_closed(const Term& t);
bool occurs(Symbol v, const Term& t);
void free_vars(const Term& t, std::vector<Symbol>& out);

// Sort of a term from its symbols' sorts; throws UnsortedTerm.
Sort sort_of(const Term& t);
// Same, but every variable must occur in ctx; throws UnknownSymbol.
Sort sort_of(const std::vector<Symbol>& ctx, const Term& t);

using Subst = std::unordered_map<Symbol, Term>;
Term substitute(const Term& t, const Subst& s);

std::string to_string(const Term& t);

// ---------------------------------------------------------------- goals

enum class GoalKind { True, Atom, And, Exists, Imp };

struct GoalNode;
using Goal = std::shared_ptr<const GoalNode>;

struct GoalNode {
  GoalKind kind = GoalKind::True;
  Term atom = nullptr;          // Atom
  std::vector<Goal> conj;       // And
  Symbol var = nullptr;         // Exists
  std::vector<Symbol> binders;  // Imp
  Goal body;                    // Exists body, Imp body (an automaton formula)
  Goal head;                    // Imp head
};

Goal g_true();
Goal g_atom(Term a);
Goal g_and(std::vector<Goal> gs);  // flattens and drops true, keeps order
Goal g_exists(Symbol v, Goal body);
Goal g_imp(std::vector<Symbol> binders, Goal body, Goal head);

std::vector<Goal> conjuncts(const Goal& g);
void free_vars(const Goal& g, std::vector<Symbol>& out);
bool has_exists(const Goal& g);
Goal substitute(const Goal& g, const Subst& s);
std::string to_string(const Goal& g);

int compare_goals(const Goal& a, const Goal& b);
bool goal_equal(const Goal& a, const Goal& b);

// ------------------------------------------------------ clauses/program

struct Clause {
  std::vector<Symbol> binders;
  Goal body;
  Term head;
};

struct Program {
  std::vector<Symbol> constructors;
  std::vector<Symbol> predicates;
  std::vector<Clause> clauses;
  std::optional<Goal> goal;

  Symbol find(const std::string& name) const;
  bool has_name(const std::string& name) const;
};

std::string to_string(const Clause& c);

// Canonical names of bound variables at nesting depth d (1-based): Z, W, V<d>_.
std::string nested_name(int depth, std::size_t index);

// Canonical forms: conjunctions flattened, deduplicated and sorted, true
// units dropped, bound variables renamed by nesting depth.
Goal canonicalize_goal(const Goal& g, int depth = 0);
Clause canonicalize_clause(const Clause& c);
Program canonicalize_program(const Program& p);

// ---------------------------------------------------------------- typing

struct Fragment {
  enum class Family { MSL, HOMSL } family;
  int order;
};
std::string to_string(const Fragment& f);

void check_goal(const Program& p, const std::vector<Symbol>& ctx, const Goal& g);
Program check_program(const Program& p);
Fragment classify_fragment(const Program& p);

bool is_identifier_char(char c);
std::string ident_safe(const std::string& name);

}  // namespace homsl
