#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "json.hpp"

namespace ghzmp::cli {
namespace {

const std::filesystem::path kScenarios{GHZMP_SCENARIO_DIR};

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

std::string scenario(const char* name) { return (kScenarios / name).string(); }

std::filesystem::path write_temp(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << text;
  return path;
}

std::vector<nlohmann::json> records(const std::string& out) {
  std::vector<nlohmann::json> rs;
  std::istringstream in(out);
  for (std::string line; std::getline(in, line);) rs.push_back(nlohmann::json::parse(line));
  return rs;
}

TEST(Cli, ParadoxFourVerifies) {
  const CliRun r = run({"paradox", "--N", "4"});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("verified (algebraic+exhaustive)"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("6561"), std::string::npos);
}

TEST(Cli, ParadoxSixFallsBackToAlgebraic) {
  const CliRun r = run({"paradox", "--N", "6", "--format", "records"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto rs = records(r.out);
  EXPECT_EQ(rs.front()["record"], "meta");
  EXPECT_EQ(rs.back()["evidence"], "algebraic");
  EXPECT_EQ(rs.back()["contradiction"], true);
  EXPECT_EQ(rs[rs.size() - 2]["skipped"], true);
}

TEST(Cli, ParadoxOutOfRangeIsInputError) {
  EXPECT_EQ(run({"paradox", "--N", "3"}).code, kExitInputError);
  EXPECT_EQ(run({"paradox", "--N", "65"}).code, kExitInputError);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({"bogus"}).code, kExitUsage);
  EXPECT_EQ(run({}).code, kExitUsage);
  EXPECT_EQ(run({"multiport"}).code, kExitUsage);
  EXPECT_EQ(run({"correlate", scenario("ghz-n4-m3.yaml"), "--format", "xml"}).code, kExitUsage);
  EXPECT_NE(run({"bogus"}).err.find("error[E_USAGE]"), std::string::npos);
}

TEST(Cli, HelpGoesToStdout) {
  const CliRun r = run({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("paradox"), std::string::npos);
}

TEST(Cli, TooManyOutcomesIsResourceLimit) {
  std::string text = "schema: ghzmp/scenario/v1\nparticles: 8\nports: 8\nphases:\n";
  for (int l = 0; l < 8; ++l) text += "  - [0, 0, 0, 0, 0, 0, 0, 0]\n";
  const auto path = write_temp("ghzmp-cli-big.yaml", text);
  const CliRun r = run({"probability", path.string()});
  EXPECT_EQ(r.code, kExitResourceLimit);
  EXPECT_NE(r.err.find("E_RESOURCE_LIMIT"), std::string::npos);
  // correlate still answers from the closed form
  const CliRun c = run({"correlate", path.string()});
  EXPECT_EQ(c.code, kExitOk);
  EXPECT_NE(c.out.find("skipped"), std::string::npos);
}

TEST(Cli, TwoPortPiSumGivesMinusOne) {
  const auto path = write_temp("ghzmp-cli-pi.yaml",
                               "schema: ghzmp/scenario/v1\nparticles: 2\nports: 2\nphases:\n"
                               "  - [\"1/4\", 0]\n  - [\"1/4\", 0]\n");
  const CliRun r = run({"correlate", path.string(), "--format", "records"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto rs = records(r.out);
  EXPECT_NEAR(rs[1]["E"]["re"].get<double>(), -1.0, 1e-12);
  EXPECT_NEAR(rs[1]["E"]["im"].get<double>(), 0.0, 1e-12);
  EXPECT_EQ(rs[1]["exact_class"]["k"], 1);
}

TEST(Cli, ScenarioErrorsReportFileAndLine) {
  const auto path = write_temp("ghzmp-cli-shape.yaml",
                               "schema: ghzmp/scenario/v1\nparticles: 2\nports: 3\nphases:\n  - [0, 0, 0]\n  - [0, 0]\n");
  const CliRun r = run({"probability", path.string()});
  EXPECT_EQ(r.code, kExitInputError);
  EXPECT_NE(r.err.find("error[E_SHAPE] " + path.string() + ":6"), std::string::npos) << r.err;
  EXPECT_EQ(run({"correlate", scenario("missing.yaml")}).code, kExitInputError);
}

TEST(Cli, NotesGoToStderr) {
  const auto path = write_temp("ghzmp-cli-note.yaml",
                               "schema: ghzmp/scenario/v1\nparticles: 1\nports: 3\nphases:\n  - [\"3/9\", 0, 0]\n");
  const CliRun r = run({"correlate", path.string()});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.err.find("ghzmp: note:"), std::string::npos);
  EXPECT_EQ(r.out.find("note"), std::string::npos);
}

TEST(Cli, LhvSearchNeedsBlock) {
  EXPECT_EQ(run({"lhv-search", scenario("bell-epr-n2-m3.yaml")}).code, kExitInputError);
}

TEST(Cli, LhvSearchFindsNoModel) {
  const CliRun r = run({"lhv-search", scenario("ghz-n4-m3.yaml"), "--format", "records"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto rs = records(r.out);
  EXPECT_EQ(rs[1]["total_models"], 6561);
  EXPECT_EQ(rs[1]["satisfying"], 0);
  EXPECT_FALSE(rs[1].contains("seconds"));
  EXPECT_EQ(rs.back()["constraint"], 5);
}

TEST(Cli, RecordRerunsAreByteIdentical) {
  const std::vector<std::vector<std::string>> commands{
      {"multiport", "--ports", "4", "--format", "records"},
      {"probability", scenario("ghz-n4-m3.yaml"), "--format", "records"},
      {"correlate", scenario("ghz-n5-m4.yaml"), "--format", "records"},
      {"sample", scenario("bell-epr-n2-m3.yaml"), "--format", "records"},
      {"lhv-search", scenario("ghz-n4-m3.yaml"), "--format", "records"},
      {"paradox", "--N", "5", "--format", "records"},
  };
  for (const auto& args : commands) {
    SCOPED_TRACE(args[0]);
    const CliRun a = run(args);
    const CliRun b = run(args);
    ASSERT_EQ(a.code, kExitOk) << a.err;
    EXPECT_EQ(a.out, b.out);
  }
}

TEST(Cli, SampleMetaEchoesGeneratorAndSeed) {
  const CliRun r = run({"sample", scenario("bell-epr-n2-m3.yaml"), "--shots", "500", "--seed", "9", "--format", "records"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto rs = records(r.out);
  EXPECT_EQ(rs[0]["generator"], "mt19937_64");
  EXPECT_EQ(rs[0]["seed"], 9);
  EXPECT_EQ(rs[0]["shots"], 500);
  std::uint64_t total = 0;
  for (const auto& rec : rs) {
    if (rec["record"] == "count") total += rec["count"].get<std::uint64_t>();
  }
  EXPECT_EQ(total, 500u);
  EXPECT_NE(run({"sample", scenario("bell-epr-n2-m3.yaml"), "--shots", "500", "--seed", "10", "--format", "records"}).out,
            r.out);
}

TEST(Cli, MultiportTextIsUnitary) {
  const CliRun r = run({"multiport", "--ports", "5"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("yes"), std::string::npos);
  EXPECT_EQ(run({"multiport", "--ports", "1"}).code, kExitInputError);
}

}  // namespace
}  // namespace ghzmp::cli
