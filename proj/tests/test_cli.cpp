#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <string>
#include <sys/wait.h>

namespace {

struct CliRun {
  int code;
  std::string out;
};

CliRun cli(const std::string& args) {
  std::string cmd = std::string(ISLKIT_BIN) + " " + args + " 2>&1";
  FILE* p = popen(cmd.c_str(), "r");
  CliRun r{-1, {}};
  if (!p) return r;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  int st = pclose(p);
  r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

std::string sample(const char* name) { return std::string(SAMPLES_DIR) + "/" + name; }

}  // namespace

TEST(Cli, WpoSample) {
  CliRun r = cli("wpo " + sample("free_alias.isl") + " --loop-bound 2");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "wpo: x == y * x != null * y != null * y -/>\n");
  r = cli("wpo " + sample("free_noalias.isl"));
  EXPECT_EQ(r.out, "wpo: x != y * x != null * y != null * y -> null\n");
}

TEST(Cli, CheckFrameEr) {
  CliRun r = cli("check " + sample("frame_er.triple") + " --witness");
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("{x=l1} | {l1=null}"), std::string::npos) << r.out;
  r = cli("--format machine check " + sample("frame_er.triple"));
  EXPECT_NE(r.out.find("verdict=invalid"), std::string::npos) << r.out;
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(cli("check -e '[exists v. x -> v] free(x) [ok: x -/>]'").code, 0);
  EXPECT_EQ(cli("entails 'x -> y' 'x -> null'").code, 1);
  EXPECT_EQ(cli("entails 'x -> null' 'exists v. x -> v'").code, 0);
  EXPECT_EQ(cli("parse -e 'x -> '").code, 64);
  EXPECT_EQ(cli("").code, 64);
  EXPECT_EQ(cli("frobnicate").code, 64);
}

TEST(Cli, ProveAndCheck) {
  CliRun r = cli("prove-synth -e '[x -> null] free(x) [ok: x -/>]'");
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("check: ok"), std::string::npos) << r.out;
}

TEST(Cli, DiffTestIsDeterministic) {
  CliRun a = cli("diff-test --suite wpo --seed 5 --cases 30");
  CliRun b = cli("diff-test --suite wpo --seed 5 --cases 30");
  EXPECT_EQ(a.code, 0) << a.out;
  EXPECT_EQ(a.out, b.out);
}
