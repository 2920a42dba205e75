#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ghzmp/lhv.hpp"
#include "ghzmp/phase.hpp"
#include "ghzmp/quantum.hpp"

namespace ghzmp {

inline constexpr int kMinParadoxParticles = 4;
inline constexpr int kMaxParadoxParticles = 64;

/// Catalog indices used by build_scenario at every station.
inline constexpr int kGradedSetting = 0;     // (0, d, 2d, ..., (M-1)d) with d = 2*pi/M^2
inline constexpr int kReferenceSetting = 1;  // all zeros

struct Experiment {
  std::string label;
  std::vector<int> pattern;  // catalog setting per station
  Residue expected;          // predicted correlation class
};

/// N = M + 1 stations, N "swap" experiments (one station at the reference
/// setting, the rest graded) followed by one all-reference experiment.
/// The last experiment is the one the others are tested against.
struct ParadoxScenario {
  int particles;
  int ports;
  Rational delta;  // graded step, as a fraction of a full turn
  SettingsCatalog catalog;
  std::vector<Experiment> experiments;

  ExperimentConfig config() const { return {particles, ports}; }
  const Experiment& test() const { return experiments.back(); }
  std::span<const Experiment> premises() const { return std::span(experiments).first(experiments.size() - 1); }
  std::vector<Constraint> premise_constraints() const;
  std::vector<Constraint> all_constraints() const;
};

/// Throws InvalidArgument unless 4 <= particles <= 64.
ParadoxScenario build_scenario(int particles);

/// Exact-path correlation class of every experiment, in order. Throws
/// IntegrityError if an experiment is not a perfect correlation or its class
/// differs from the expected one.
std::vector<Residue> verify_quantum(const ParadoxScenario& scenario);

struct RunOptions {
  bool skip_enumeration = false;
  std::uint64_t model_limit = kMaxModels;
};

struct ExhaustiveEvidence {
  std::uint64_t total_models = 0;
  std::uint64_t premise_models = 0;  // satisfy every premise
  std::uint64_t all_models = 0;      // satisfy premises and the test experiment
  std::optional<DeterministicModel> premise_witness;
  double seconds = 0.0;
};

struct ContradictionReport {
  ParadoxScenario scenario;
  std::vector<CorrelationValue> quantum;  // per experiment, exact class filled in
  std::optional<ForcedValue> forced;      // implied by the premises alone
  std::optional<ExhaustiveEvidence> exhaustive;
  std::string exhaustive_note;            // why the exhaustive stage did not run
  bool contradiction = false;             // forced value differs from the test's quantum class

  const Residue& quantum_class(std::size_t experiment) const { return *quantum.at(experiment).exact_class; }
  /// Contradiction holds and, when enumeration ran, no model survives all
  /// constraints while some model satisfies the premises.
  bool verified() const;
};

ContradictionReport run_paradox(const ParadoxScenario& scenario, const RunOptions& options = {});
ContradictionReport run_paradox(int particles, const RunOptions& options = {});

}  // namespace ghzmp
