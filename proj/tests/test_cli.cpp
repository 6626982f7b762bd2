#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <regex>
#include <string>
#include <sys/wait.h>

#include "support.hpp"

using homsl::testing::corpus_path;

namespace {

struct CliRun {
  int code;
  std::string out;
};

CliRun run(const std::string& args, bool merge_stderr = false) {
  std::string cmd = std::string(HOMSL_CLI_PATH) + " " + args + (merge_stderr ? " 2>&1" : " 2>/dev/null");
  FILE* f = popen(cmd.c_str(), "r");
  std::string out;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, f)) > 0) out.append(buf, n);
  int status = pclose(f);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string strip_timings(const std::string& json) {
  return std::regex_replace(json, std::regex("\"(decide_ms|total_ms)\": [0-9.eE+-]+"), "\"$1\": 0");
}

}  // namespace

TEST(Cli, CheckPrintsVerdictOnly) {
  CliRun r = run("check " + corpus_path("lazy_io.homsl"));
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "provable\n");
}

TEST(Cli, ExpectMatches) {
  EXPECT_EQ(run("check " + corpus_path("ho_transform_msl.homsl") + " --expect provable").code, 0);
  EXPECT_EQ(run("check " + corpus_path("ho_transform_msl.homsl") + " --expect unprovable").code, 1);
}

TEST(Cli, MissingFile) {
  CliRun r = run("check /nonexistent/missing.homsl", true);
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("error["), std::string::npos);
}

TEST(Cli, UsageError) {
  EXPECT_EQ(run("check").code, 2);
  EXPECT_EQ(run("frobnicate x").code, 2);
}

TEST(Cli, BudgetExceeded) {
  CliRun r = run("check " + corpus_path("lazy_io.homsl") + " --budget 3", true);
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.out.find("error[BudgetExceeded]"), std::string::npos);
}

TEST(Cli, ProofIsChecked) {
  CliRun r = run("check " + corpus_path("lazy_io.homsl") + " --proof");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("proof: checked"), std::string::npos) << r.out;
}

TEST(Cli, Fragment) {
  CliRun r = run("fragment " + corpus_path("ho_transform.homsl"));
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("HOMSL", 0), 0u) << r.out;
}

TEST(Cli, SocketVerify) {
  CliRun bad = run("socket-verify " + corpus_path("socket_send_listening.sock"));
  EXPECT_EQ(bad.out, "VIOLATION\n");
  EXPECT_EQ(bad.code, 1);
  CliRun ok = run("socket-verify " + corpus_path("socket_send_accepted.sock"));
  EXPECT_EQ(ok.out, "OK\n");
  EXPECT_EQ(ok.code, 0);
  EXPECT_EQ(run("socket-verify " + corpus_path("socket_send_listening.sock") + " --expect violation").code, 0);
  EXPECT_EQ(run("socket-verify " + corpus_path("socket_exit_on_close.sock") + " --expect violation").code, 1);
}

TEST(Cli, ImportHors) {
  CliRun r = run("import-hors " + corpus_path("g2.hors"));
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("?- qS S."), std::string::npos) << r.out;
}

TEST(Cli, JsonIsDeterministicAcrossWorkers) {
  for (const char* f : {"lazy_io.homsl", "ho_transform.homsl", "ho_transform_msl.homsl"}) {
    CliRun a = run("check --json --jobs 1 " + corpus_path(f));
    CliRun b = run("check --json --jobs 4 " + corpus_path(f));
    ASSERT_EQ(a.code, 0);
    EXPECT_EQ(strip_timings(a.out), strip_timings(b.out)) << f;
    EXPECT_NE(a.out.find("\"outcome\": \"provable\""), std::string::npos);
  }
}

TEST(Cli, SaturateIsDeterministicAcrossWorkers) {
  std::string f = corpus_path("lazy_io.homsl");
  EXPECT_EQ(run("saturate " + f).out, run("saturate --jobs 3 " + f).out);
}
