#pragma once

#include <unordered_map>
#include <vector>

#include "homsl/core.hpp"

namespace homsl {

// Symbol correspondence produced by one higher-order-predicate elimination.
struct HoMap {
  bool identity = true;
  Symbol truth = nullptr;
  std::unordered_map<Symbol, Symbol> pred_to_con;
  std::unordered_map<Symbol, Symbol> con_to_pred;
};

Program ensure_adequate(const Program& p);
Program eliminate_pred_existentials(const Program& p);
Program eliminate_ho_predicates(const Program& p, HoMap* map = nullptr);
Program eliminate_existentials(const Program& p);
Program reduce_all(const Program& p);

// Programs where every predicate is i -> o and every head is P (c ys).
bool is_msl_normal(const Program& p);
bool needs_reduction(const Program& p);

// Name of the universal relation at a predicate sort.
std::string universal_name(Sort rho);
Symbol find_universal(const Program& p, Sort rho);

struct Reduction {
  bool reduced = false;
  Program adequate;  // input with universal relations and inhabitants
  Program result;    // existential-free MSL(omega)
  std::vector<HoMap> maps;
};
Reduction reduce_with_maps(const Program& p);

// Image of an existential-free goal through the higher-order eliminations.
Goal translate_goal(const Reduction& r, const Goal& g);
Goal translate_goal(const HoMap& m, const Goal& g);
Term translate_term(const HoMap& m, const Term& t);

}  // namespace homsl
