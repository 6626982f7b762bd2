#pragma once

#include <string>
#include <vector>

#include "homsl/core.hpp"

namespace homsl {

// Parses a .homsl file and type-checks it.
Program parse_program(const std::string& text);
Program parse_file(const std::string& path);

// Parses a goal against the declarations of `sig`. Identifiers found in
// `free` resolve to those variables; any other undeclared identifier becomes
// a fresh variable (sort inferred) and is appended to `free`.
Goal parse_goal(const Program& sig, const std::string& text, std::vector<Symbol>& free);
Term parse_term(const Program& sig, const std::string& text, std::vector<Symbol>& free);
Sort parse_sort(const std::string& text);

std::string print_program(const Program& p);
std::string print_formula(const Goal& g);

}  // namespace homsl
