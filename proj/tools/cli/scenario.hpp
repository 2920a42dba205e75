#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "ghzmp/lhv.hpp"
#include "ghzmp/quantum.hpp"

namespace ghzmp::cli {

inline constexpr std::string_view kScenarioSchema = "ghzmp/scenario/v1";

struct Diagnostic {
  std::string code;  // E_SYNTAX, E_SHAPE, ...
  int line = 0;      // 1-based; 0 when no location applies
  std::string message;
};

/// Every problem found while reading a scenario, in file order.
class ScenarioError : public std::runtime_error {
 public:
  explicit ScenarioError(std::vector<Diagnostic> diagnostics);
  const std::vector<Diagnostic>& diagnostics() const noexcept { return diagnostics_; }

 private:
  std::vector<Diagnostic> diagnostics_;
};

struct LhvBlock {
  SettingsCatalog catalog;
  std::vector<Constraint> constraints;
  friend bool operator==(const LhvBlock&, const LhvBlock&) = default;
};

struct SamplingBlock {
  std::uint64_t shots = 10000;
  std::uint64_t seed = 1;
  friend bool operator==(const SamplingBlock&, const SamplingBlock&) = default;
};

struct Scenario {
  ExperimentConfig config;
  PhaseSettings phases;
  std::optional<LhvBlock> lhv;
  std::optional<SamplingBlock> sampling;
  std::vector<std::string> notes;  // non-fatal normalizations, excluded from equality

  friend bool operator==(const Scenario& a, const Scenario& b) {
    return a.config == b.config && a.phases == b.phases && a.lhv == b.lhv && a.sampling == b.sampling;
  }
};

/// Reads and validates a scenario file. Throws ScenarioError listing all problems.
Scenario parse_scenario(const std::filesystem::path& path);
Scenario parse_scenario_text(std::string_view text);

/// Canonical JSON form of a scenario. It is itself a valid scenario document.
nlohmann::ordered_json scenario_to_json(const Scenario& scenario);

}  // namespace ghzmp::cli
