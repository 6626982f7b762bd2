#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "homsl/core.hpp"
#include "homsl/hors.hpp"
#include "homsl/proofs.hpp"
#include "homsl/protocol.hpp"
#include "homsl/reductions.hpp"
#include "homsl/saturation.hpp"
#include "homsl/surface.hpp"
#include "homsl/types_bridge.hpp"

using namespace homsl;
using json = nlohmann::ordered_json;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("IoError", "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_out(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw Error("IoError", "cannot write " + path);
  out << text;
}

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

struct CheckArgs {
  std::string file;
  bool trace = false, proof = false, json = false;
  std::string expect;
  std::size_t budget = default_budget();
  unsigned jobs = 1;
};

int run_check(const CheckArgs& a) {
  auto t0 = std::chrono::steady_clock::now();
  Program p = parse_file(a.file);
  DecideOptions opts;
  opts.budget = a.budget;
  opts.jobs = a.jobs;
  Verdict v = decide(p, opts);
  double decide_ms = ms_since(t0);

  if (a.trace)
    for (const auto& c : v.solved.clauses)
      std::cerr << "round " << c.round << " clause " << c.source + 1 << ": " << to_string(c.clause) << "\n";

  std::optional<Reconstruction> rec;
  CheckResult checked;
  if (a.proof && v.provable) {
    rec = reconstruct_proof(p, v, opts);
    if (rec->proof) checked = check(proof_program(v, *rec), *rec->proof);
  }
  std::string outcome = v.provable ? "provable" : "not provable";

  if (a.json) {
    json j;
    j["file"] = a.file;
    j["outcome"] = outcome;
    j["fragment"] = to_string(classify_fragment(p));
    j["reduced"] = v.reduction.reduced;
    j["input_clauses"] = p.clauses.size();
    j["automaton_clauses"] = v.solved.clauses.size();
    j["rounds"] = v.solved.rounds;
    j["complete"] = v.solved.complete;
    if (rec) {
      j["proof"] = rec->proof ? format_proof(*rec->proof) : "";
      j["proof_valid"] = rec->proof && checked.valid;
      j["proof_over_reduced"] = rec->over_reduced;
    }
    j["timings"] = {{"decide_ms", decide_ms}, {"total_ms", ms_since(t0)}};
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << outcome << "\n";
    if (rec) {
      if (!rec->proof) {
        std::cout << "proof: not found (" << rec->note << ")\n";
      } else {
        std::cout << format_proof(*rec->proof);
        std::cout << "proof: " << (checked.valid ? "checked" : "INVALID at " + checked.path + ": " + checked.reason)
                  << (rec->over_reduced ? " (against the reduced program)" : "") << "\n";
      }
    }
  }
  if (rec && rec->proof && !checked.valid) return 1;
  if (!a.expect.empty() && (a.expect == "provable") != v.provable) return 1;
  return 0;
}

Program transform(const Program& p, const std::string& pass) {
  if (pass == "adequate") return ensure_adequate(p);
  if (pass == "elim-pred-exists") return eliminate_pred_existentials(p);
  if (pass == "elim-ho-preds") return eliminate_ho_predicates(p);
  if (pass == "elim-exists") return eliminate_existentials(p);
  return reduce_all(p);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decision procedure for higher-order monadic shallow linear Horn clauses"};
  app.require_subcommand(1);

  CheckArgs ca;
  auto* check_cmd = app.add_subcommand("check", "Decide whether the goal follows from the clauses");
  check_cmd->add_option("file", ca.file)->required();
  check_cmd->add_flag("--trace", ca.trace, "Log solved-form clauses to stderr");
  check_cmd->add_flag("--proof", ca.proof, "Reconstruct and check a proof");
  check_cmd->add_flag("--json", ca.json, "Print a single JSON object");
  check_cmd->add_option("--expect", ca.expect)->check(CLI::IsMember({"provable", "unprovable"}));
  check_cmd->add_option("--budget", ca.budget);
  check_cmd->add_option("--jobs", ca.jobs)->check(CLI::Range(1u, 256u));

  std::string file, out, pass = "all", expect;
  unsigned jobs = 1;
  auto* sat_cmd = app.add_subcommand("saturate", "Print the canonical solved form");
  sat_cmd->add_option("file", file)->required();
  sat_cmd->add_option("-o", out);
  sat_cmd->add_option("--jobs", jobs)->check(CLI::Range(1u, 256u));

  auto* tr_cmd = app.add_subcommand("transform", "Apply reduction passes");
  tr_cmd->add_option("file", file)->required();
  tr_cmd->add_option("--pass", pass)
      ->check(CLI::IsMember({"adequate", "elim-pred-exists", "elim-ho-preds", "elim-exists", "all"}));
  tr_cmd->add_option("-o", out);

  auto* emit_cmd = app.add_subcommand("emit-hors", "Translate a program into a recursion scheme");
  emit_cmd->add_option("file", file)->required();
  emit_cmd->add_option("-o", out);

  auto* imp_cmd = app.add_subcommand("import-hors", "Translate a recursion scheme into clauses");
  imp_cmd->add_option("file", file)->required();
  imp_cmd->add_option("-o", out);

  auto* sock_cmd = app.add_subcommand("socket-verify", "Check a socket script against the protocol");
  sock_cmd->add_option("file", file)->required();
  sock_cmd->add_option("--expect", expect)->check(CLI::IsMember({"violation", "ok"}));
  sock_cmd->add_option("-o", out, "Also write the generated clauses here");

  auto* frag_cmd = app.add_subcommand("fragment", "Print the fragment a program belongs to");
  frag_cmd->add_option("file", file)->required();

  auto* types_cmd = app.add_subcommand("types", "Print the intersection types read off the solved form");
  types_cmd->add_option("file", file)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error[Usage]: " << e.what() << "\n";
    return 2;
  }

  try {
    if (*check_cmd) return run_check(ca);
    if (*sat_cmd) {
      Program p = parse_file(file);
      Reduction r = reduce_with_maps(p);
      SaturateOptions so;
      so.jobs = jobs;
      SolvedForm s = saturate(r.result, so);
      write_out(out, print_program(solved_program(r.result, s)));
    } else if (*tr_cmd) {
      write_out(out, print_program(transform(parse_file(file), pass)));
    } else if (*emit_cmd) {
      Program p = parse_file(file);
      write_out(out, print_hors(emit_hors(reduce_with_maps(p).result)));
    } else if (*imp_cmd) {
      write_out(out, print_program(import_hors(parse_hors(read_file(file)))));
    } else if (*sock_cmd) {
      Program p = compile_script(parse_script(read_file(file)));
      if (!out.empty()) write_out(out, print_program(p));
      bool bad = decide(p).provable;
      std::cout << (bad ? "VIOLATION" : "OK") << "\n";
      if (expect.empty()) return bad ? 1 : 0;
      return (expect == "violation") == bad ? 0 : 1;
    } else if (*frag_cmd) {
      std::cout << to_string(classify_fragment(parse_file(file))) << "\n";
    } else if (*types_cmd) {
      Program p = parse_file(file);
      std::cout << to_string(typing_algorithm(reduce_with_maps(p).result));
    }
    return 0;
  } catch (const Error& e) {
    std::cerr << "error[" << e.code() << "]: " << e.what() << "\n";
    return e.code() == "BudgetExceeded" ? 3 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error[Internal]: " << e.what() << "\n";
    return 2;
  }
}
