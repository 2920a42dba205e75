#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <string>

#include "scenario.hpp"

namespace ghzmp::cli {
namespace {

const std::filesystem::path kScenarios{GHZMP_SCENARIO_DIR};

constexpr std::string_view kHeader = "schema: ghzmp/scenario/v1\n";

std::vector<Diagnostic> diagnostics_of(std::string_view text) {
  try {
    parse_scenario_text(text);
  } catch (const ScenarioError& e) {
    return e.diagnostics();
  }
  return {};
}

bool has(const std::vector<Diagnostic>& ds, std::string_view code, int line = -1) {
  return std::any_of(ds.begin(), ds.end(), [&](const Diagnostic& d) { return d.code == code && (line < 0 || d.line == line); });
}

TEST(ParseScenario, BundledFilesLoad) {
  int seen = 0;
  for (const auto& entry : std::filesystem::directory_iterator(kScenarios)) {
    if (entry.path().extension() != ".yaml") continue;
    SCOPED_TRACE(entry.path().string());
    EXPECT_NO_THROW(parse_scenario(entry.path()));
    ++seen;
  }
  EXPECT_GE(seen, 4);
}

TEST(ParseScenario, GhzFourHasExactPhasesAndLhvBlock) {
  const Scenario s = parse_scenario(kScenarios / "ghz-n4-m3.yaml");
  EXPECT_EQ(s.config, (ExperimentConfig{4, 3}));
  EXPECT_TRUE(s.phases.all_exact());
  EXPECT_EQ(*s.phases.at(0, 1).turns(), Rational(1, 9));
  ASSERT_TRUE(s.lhv);
  EXPECT_EQ(s.lhv->catalog.settings(2), 2);
  ASSERT_EQ(s.lhv->constraints.size(), 5u);
  EXPECT_EQ(s.lhv->constraints[4].required, Residue(0, 3));
  ASSERT_TRUE(s.sampling);
  EXPECT_EQ(s.sampling->seed, 2024u);
}

TEST(ParseScenario, MissingClassIsFilledFromQuantumWithNote) {
  const Scenario s = parse_scenario(kScenarios / "ghz-n5-m4.yaml");
  ASSERT_TRUE(s.lhv);
  EXPECT_EQ(s.lhv->constraints[4].required, Residue(3, 4));
  EXPECT_FALSE(s.notes.empty());
}

TEST(ParseScenario, ShapeErrorNamesTheRow) {
  const auto ds = diagnostics_of(std::string(kHeader) +
                                 "particles: 2\nports: 3\nphases:\n  - [0, 0, 0]\n  - [0, 0]\n");
  ASSERT_TRUE(has(ds, "E_SHAPE", 6));
  const auto it = std::find_if(ds.begin(), ds.end(), [](const Diagnostic& d) { return d.code == "E_SHAPE"; });
  EXPECT_NE(it->message.find("row 2"), std::string::npos) << it->message;
}

TEST(ParseScenario, RowCountMismatch) {
  EXPECT_TRUE(has(diagnostics_of(std::string(kHeader) + "particles: 3\nports: 2\nphases:\n  - [0, 0]\n"), "E_SHAPE"));
}

TEST(ParseScenario, UnreducedRationalIsANote) {
  const Scenario s = parse_scenario_text(std::string(kHeader) + "particles: 1\nports: 3\nphases:\n  - [\"3/9\", 0, 0]\n");
  EXPECT_EQ(*s.phases.at(0, 0).turns(), Rational(1, 3));
  ASSERT_EQ(s.notes.size(), 1u);
  EXPECT_NE(s.notes[0].find("3/9"), std::string::npos);
}

TEST(ParseScenario, OutOfRangeTurnsWrapWithNote) {
  const Scenario s = parse_scenario_text(std::string(kHeader) + "particles: 1\nports: 2\nphases:\n  - [\"5/4\", \"-1/4\"]\n");
  EXPECT_EQ(*s.phases.at(0, 0).turns(), Rational(1, 4));
  EXPECT_EQ(*s.phases.at(0, 1).turns(), Rational(3, 4));
  EXPECT_EQ(s.notes.size(), 2u);
}

TEST(ParseScenario, UnknownFieldReported) {
  const auto ds = diagnostics_of(std::string(kHeader) + "particles: 1\nports: 2\nphases:\n  - [0, 0]\ncolour: red\n");
  EXPECT_TRUE(has(ds, "E_UNKNOWN_FIELD", 6));
}

TEST(ParseScenario, AllProblemsCollected) {
  const auto ds = diagnostics_of("schema: nope\nparticles: 0\nports: 99\n");
  EXPECT_TRUE(has(ds, "E_SCHEMA", 1));
  EXPECT_TRUE(has(ds, "E_RANGE", 2));
  EXPECT_TRUE(has(ds, "E_RANGE", 3));
  EXPECT_TRUE(has(ds, "E_MISSING_FIELD"));
}

TEST(ParseScenario, SyntaxErrorHasLine) {
  const auto ds = diagnostics_of("schema: ghzmp/scenario/v1\nphases: [1, 2\n");
  ASSERT_FALSE(ds.empty());
  EXPECT_EQ(ds[0].code, "E_SYNTAX");
  EXPECT_GT(ds[0].line, 0);
}

TEST(ParseScenario, BadPhaseAndZeroDenominator) {
  const auto ds = diagnostics_of(std::string(kHeader) + "particles: 1\nports: 2\nphases:\n  - [\"1/0\", abc]\n");
  EXPECT_TRUE(has(ds, "E_PHASE", 5));
}

TEST(ParseScenario, MissingFile) {
  try {
    parse_scenario(kScenarios / "does-not-exist.yaml");
    FAIL();
  } catch (const ScenarioError& e) {
    ASSERT_EQ(e.diagnostics().size(), 1u);
    EXPECT_EQ(e.diagnostics()[0].code, "E_FILE");
  }
}

TEST(ParseScenario, ConstraintPatternChecked) {
  const auto ds = diagnostics_of(std::string(kHeader) +
                                 "particles: 2\nports: 2\nphases:\n  - [0, 0]\n  - [0, 0]\n"
                                 "lhv:\n  settings:\n    - [0, 0]\n  constraints:\n    - {pattern: [0, 1], class: 0}\n");
  EXPECT_TRUE(has(ds, "E_CONSTRAINT"));
}

TEST(ParseScenario, ClasslessConstraintMustBePerfect) {
  const auto ds = diagnostics_of(std::string(kHeader) +
                                 "particles: 2\nports: 3\nphases:\n  - [0, 0, 0]\n  - [0, 0, 0]\n"
                                 "lhv:\n  settings:\n    - [0, \"1/12\", 0]\n  constraints:\n    - {pattern: [0, 0]}\n");
  EXPECT_TRUE(has(ds, "E_NOT_PERFECT"));
}

TEST(ScenarioEcho, JsonRoundTripsThroughParser) {
  for (const char* name : {"mach-zehnder-n1-m2.yaml", "bell-epr-n2-m3.yaml", "ghz-n4-m3.yaml", "ghz-n5-m4.yaml"}) {
    SCOPED_TRACE(name);
    const Scenario s = parse_scenario(kScenarios / name);
    const std::string echo = scenario_to_json(s).dump();
    const Scenario back = parse_scenario_text(echo);
    EXPECT_EQ(back, s);
    EXPECT_EQ(scenario_to_json(back).dump(), echo);
  }
}

TEST(ScenarioEcho, ApproximateAnglesSurviveRoundTrip) {
  const Scenario s =
      parse_scenario_text(std::string(kHeader) + "particles: 1\nports: 2\nphases:\n  - [0.1, 3.0000000000000004]\n");
  EXPECT_FALSE(s.phases.all_exact());
  EXPECT_EQ(parse_scenario_text(scenario_to_json(s).dump()), s);
}

}  // namespace
}  // namespace ghzmp::cli
