#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "homsl/core.hpp"
#include "homsl/saturation.hpp"

namespace homsl {

enum class ProofRule { T, And, Ex, Res };

struct ProofNode {
  ProofRule rule = ProofRule::T;
  Goal conclusion;
  std::vector<ProofNode> children;
  std::size_t clause = 0;    // Res: index into the program's clauses
  std::vector<Term> subst;   // Res: one closed term per clause binder
  Term witness;              // Ex
};

struct CheckResult {
  bool valid = true;
  std::string path;  // dotted child indices from "root"
  std::string reason;
};

// Independent checker; shares no code with the rewriting engine.
CheckResult check(const Program& d, const ProofNode& pf);

// Closed terms of sort s over the constructors and predicates of d, ordered
// by size and then lexicographically. Stops after `cap` terms.
std::vector<Term> closed_terms(const Program& d, Sort s, std::size_t max_size, std::size_t cap = 100000);

// Depth counts nested resolution steps; witnesses range over closed terms of
// at most term_size symbols.
std::optional<ProofNode> brute_force(const Program& d, const Goal& g, int depth, int term_size);

struct Reconstruction {
  std::optional<ProofNode> proof;
  bool over_reduced = false;  // proof refers to the reduced program
  std::string note;
};

// Rebuilds a proof for a Provable verdict. The search runs over the input
// program with universal relations added, using the solved form to decide
// which subgoals are provable; if that fails it searches the reduced program.
Reconstruction reconstruct_proof(const Program& input, Verdict& v, const DecideOptions& opts = {});

// The program a reconstructed proof refers to.
const Program& proof_program(const Verdict& v, const Reconstruction& r);

std::string format_proof(const ProofNode& pf);
std::size_t proof_size(const ProofNode& pf);

}  // namespace homsl
