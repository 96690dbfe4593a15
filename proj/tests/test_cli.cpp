#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"

namespace fs = std::filesystem;
using schurlab::cli::run_cli;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(is), {}};
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("schurlab_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"verify", "--n", "0"}).code, 2);
  EXPECT_EQ(run({"verify", "--suite", "everything"}).code, 2);
  EXPECT_EQ(run({"sweep", "--m", "9..4"}).code, 2);
  EXPECT_EQ(run({"sweep", "--m", "2..5"}).code, 2);
  EXPECT_EQ(run({"sweep", "--m", "3..300"}).code, 2);
  EXPECT_EQ(run({"sweep", "--space", "frobenius"}).code, 2);
  EXPECT_EQ(run({"theorem", "--config", "/nonexistent/cfg.json"}).code, 2);
}

TEST(Cli, HelpAndVersionExitZero) {
  EXPECT_EQ(run({"--help"}).code, 0);
  const auto v = run({"--version"});
  EXPECT_EQ(v.code, 0);
  EXPECT_NE(v.out.find('.'), std::string::npos);
}

TEST(Cli, VerifySuitesPass) {
  const auto a = run({"verify", "--suite", "identities", "--trials", "40", "--n", "8"});
  EXPECT_EQ(a.code, 0) << a.err;
  EXPECT_NE(a.out.find("\"schur_commutator_identity\""), std::string::npos);
  const auto b = run({"verify", "--suite", "hilbert", "--m", "40"});
  EXPECT_EQ(b.code, 0) << b.err;
}

TEST(Cli, VerifyFailsWithImpossibleTolerance) {
  const auto r = run({"verify", "--suite", "identities", "--trials", "40", "--n", "8", "--tol", "1e-30"});
  EXPECT_EQ(r.code, 1);
}

TEST(Cli, SweepCsv) {
  const auto r = run({"sweep", "--m", "3..10", "--space", "schatten:inf"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "m,p,s,bound,achieved,margin,pass,reason");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 8);
}

TEST(Cli, SweepWithFixedLargePFails) {
  // p = 1 violates ||W_m|| <= 1/m^2
  const auto r = run({"sweep", "--m", "3..6", "--p", "1"});
  EXPECT_EQ(r.code, 1);
}

TEST(Cli, SweepSkipsOversizedStages) {
  const auto r = run({"sweep", "--m", "3..12", "--size-cap", "16"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("skip"), std::string::npos);
}

TEST(Cli, TheoremWritesDeterministicArtifacts) {
  const auto dir = scratch("theorem");
  std::ofstream(dir / "cfg.json") << R"({"m_max": 10, "spec": "schatten:1", "mode": "sum"})";
  const auto a = run({"theorem", "--config", (dir / "cfg.json").string(), "--out", (dir / "a").string()});
  ASSERT_EQ(a.code, 0) << a.err;
  const auto b = run({"theorem", "--config", (dir / "cfg.json").string(), "--out", (dir / "b").string()});
  ASSERT_EQ(b.code, 0) << b.err;
  for (const char* f : {"report.json", "stages.csv", "f_E.csv"}) {
    ASSERT_TRUE(fs::exists(dir / "a" / f)) << f;
    EXPECT_EQ(slurp(dir / "a" / f), slurp(dir / "b" / f)) << f;
  }
  EXPECT_EQ(slurp(dir / "a" / "report.json").find("timestamp"), std::string::npos);
  fs::remove_all(dir);
}

TEST(Cli, TheoremRejectsBrokenConfig) {
  const auto dir = scratch("broken");
  std::ofstream(dir / "bad_family.json") << R"({"m_max": 10, "spec": "schatten:2"})";
  std::ofstream(dir / "bad_key.json") << R"({"m_max": 10, "colour": "red"})";
  std::ofstream(dir / "bad_json.json") << R"({"m_max": )";
  for (const char* f : {"bad_family.json", "bad_key.json", "bad_json.json"}) {
    const auto r = run({"theorem", "--config", (dir / f).string(), "--out", (dir / "out").string()});
    EXPECT_EQ(r.code, 2) << f;
    EXPECT_FALSE(r.err.empty()) << f;
  }
  fs::remove_all(dir);
}
