#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "acyclify/cli.hpp"
#include "acyclify/formula.hpp"

using namespace acyclify;

namespace {

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = runCli(args, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST(Cli, StratifyTable) {
  const CliResult r = run({"stratify", "x in y & z in y"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("x -2 1"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("y -1 2"), std::string::npos);
  EXPECT_NE(r.out.find("z -2 3"), std::string::npos);
}

TEST(Cli, StratifyJson) {
  const CliResult r = run({"stratify", "x in y", "--format", "json"});
  ASSERT_EQ(r.code, kExitOk);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_TRUE(j.dump().find("-2") != std::string::npos) << r.out;
}

TEST(Cli, NotStratified) {
  const CliResult r = run({"stratify", "x in x"});
  EXPECT_EQ(r.code, kExitNotStratified);
  EXPECT_NE((r.out + r.err).find("x in x"), std::string::npos);
}

TEST(Cli, ParseError) {
  EXPECT_EQ(run({"stratify", "x in"}).code, kExitParseError);
  EXPECT_EQ(run({"translate", "(x in y"}).code, kExitParseError);
}

TEST(Cli, AcyclicReport) {
  EXPECT_EQ(run({"acyclic", "x in y & z in y"}).code, kExitOk);
  const CliResult r = run({"acyclic", "x in y & z in y & w in x & w in z"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("Cyclic"), std::string::npos);
}

TEST(Cli, GraphDot) {
  const CliResult r = run({"graph", "x in y", "--dot"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("graph variables"), std::string::npos);
}

TEST(Cli, TranslateIsAcyclicAndDeterministic) {
  for (const char* text : {"x in y & z in y", "x in y & z in y & w in x & w in z"}) {
    const CliResult a = run({"translate", text});
    const CliResult b = run({"translate", text});
    ASSERT_EQ(a.code, kExitOk);
    EXPECT_EQ(a.out, b.out);
    std::string formula = a.out;
    while (!formula.empty() && formula.back() == '\n') formula.pop_back();
    const CliResult check = run({"acyclic", formula});
    EXPECT_EQ(check.code, kExitOk);
    EXPECT_EQ(check.out.rfind("Acyclic", 0), 0u) << check.out;
  }
}

TEST(Cli, TranslateReport) {
  const CliResult r = run({"translate", "x in y", "--report", "--mode", "nested", "--guard", "fn", "--atoms", "separate"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("pipeline: nested"), std::string::npos);
  EXPECT_NE(r.out.find("guard: fn"), std::string::npos);
  EXPECT_NE(r.out.find("acyclic"), std::string::npos);
}

TEST(Cli, BadOptionValue) { EXPECT_NE(run({"translate", "x in y", "--mode", "sideways"}).code, kExitOk); }

TEST(Cli, VerifyAgrees) {
  const CliResult r = run({"verify", "r in s"});
  EXPECT_EQ(r.code, kExitOk) << r.out << r.err;
  EXPECT_NE(r.out.find("verdict: agree"), std::string::npos);
}

TEST(Cli, VerifyMutationDisagrees) {
  const CliResult r = run({"verify", "x = y", "--mutate", "drop-ident"});
  EXPECT_EQ(r.code, kExitDisagreement);
  EXPECT_NE(r.out.find("counterexample"), std::string::npos);
}

TEST(Cli, VerifyCap) { EXPECT_EQ(run({"verify", "x = y", "--base-rank", "6"}).code, kExitCapExceeded); }

TEST(Cli, FileInput) {
  const auto dir = std::filesystem::temp_directory_path() / "acyclify_cli_test";
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "a.txt") << "x in y\n";
  std::ofstream(dir / "b.txt") << "x in x\n";
  EXPECT_EQ(run({"stratify", "--file", (dir / "a.txt").string()}).code, kExitOk);
  EXPECT_EQ(run({"stratify", "--file", dir.string()}).code, kExitNotStratified);
  std::filesystem::remove_all(dir);
}

TEST(Cli, ExploreMatrix) {
  const CliResult r = run({"explore-counterexample"});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("predicate"), std::string::npos);
  EXPECT_NE(r.out.find("constant"), std::string::npos);
  EXPECT_NE(r.out.find("under predicate reading: false"), std::string::npos) << r.out;
}

TEST(Cli, ExploreExtensionalControl) {
  const CliResult r = run({"explore-counterexample", "--atoms-count", "0", "x in y"});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(r.out.find("DIFFER"), std::string::npos) << r.out;
}
