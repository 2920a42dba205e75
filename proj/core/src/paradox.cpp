#include "ghzmp/paradox.hpp"

#include <chrono>
#include <string>

#include "ghzmp/errors.hpp"

namespace ghzmp {

std::vector<Constraint> ParadoxScenario::premise_constraints() const {
  std::vector<Constraint> out;
  for (const Experiment& e : premises()) out.push_back({e.pattern, e.expected});
  return out;
}

std::vector<Constraint> ParadoxScenario::all_constraints() const {
  std::vector<Constraint> out;
  for (const Experiment& e : experiments) out.push_back({e.pattern, e.expected});
  return out;
}

ParadoxScenario build_scenario(int particles) {
  if (particles < kMinParadoxParticles || particles > kMaxParadoxParticles) {
    throw InvalidArgument("the N = M+1 paradox family needs " + std::to_string(kMinParadoxParticles) +
                          " <= N <= " + std::to_string(kMaxParadoxParticles) + ", got N = " +
                          std::to_string(particles));
  }
  const int ports = particles - 1;
  const Rational delta(1, static_cast<std::int64_t>(ports) * ports);

  SettingsCatalog::Setting graded;
  for (int m = 0; m < ports; ++m) graded.push_back(PhaseAngle::from_turns(Rational(m) * delta));
  const SettingsCatalog::Setting reference(static_cast<std::size_t>(ports));
  SettingsCatalog catalog = SettingsCatalog::shared(particles, ports, {graded, reference});

  const Residue swap_class(ports - 1, ports);  // gamma_M^(N-2), the conjugate of gamma_M
  std::vector<Experiment> experiments;
  // Start with the last station at the reference setting and move it towards the first.
  for (int station = particles - 1; station >= 0; --station) {
    std::vector<int> pattern(static_cast<std::size_t>(particles), kGradedSetting);
    pattern[static_cast<std::size_t>(station)] = kReferenceSetting;
    experiments.push_back({"swap station " + std::to_string(station + 1), std::move(pattern), swap_class});
  }
  experiments.push_back({"all reference", std::vector<int>(static_cast<std::size_t>(particles), kReferenceSetting),
                         Residue(0, ports)});
  return ParadoxScenario{particles, ports, delta, std::move(catalog), std::move(experiments)};
}

namespace {

std::vector<CorrelationValue> quantum_values(const ParadoxScenario& scenario) {
  std::vector<CorrelationValue> out;
  for (const Experiment& e : scenario.experiments) {
    const CorrelationValue value = correlation_closed(scenario.config(), scenario.catalog.settings_for(e.pattern));
    if (!value.exact_class) {
      throw IntegrityError("experiment \"" + e.label + "\" is not a perfect correlation: |E| = " +
                           std::to_string(std::abs(value.value)));
    }
    if (!(*value.exact_class == e.expected)) {
      throw IntegrityError("experiment \"" + e.label + "\" has class " + std::to_string(value.exact_class->value()) +
                           ", expected " + std::to_string(e.expected.value()) + " (mod " +
                           std::to_string(scenario.ports) + ")");
    }
    out.push_back(value);
  }
  return out;
}

}  // namespace

std::vector<Residue> verify_quantum(const ParadoxScenario& scenario) {
  std::vector<Residue> classes;
  for (const CorrelationValue& v : quantum_values(scenario)) classes.push_back(*v.exact_class);
  return classes;
}

bool ContradictionReport::verified() const {
  if (!contradiction) return false;
  if (!exhaustive) return true;
  return exhaustive->all_models == 0 && exhaustive->premise_models > 0;
}

ContradictionReport run_paradox(const ParadoxScenario& scenario, const RunOptions& options) {
  ContradictionReport report{scenario, quantum_values(scenario), std::nullopt, std::nullopt, {}, false};

  const std::vector<Constraint> premises = scenario.premise_constraints();
  report.forced = ghz_forced_value(premises, scenario.catalog);
  report.contradiction = report.forced && report.forced->pattern == scenario.test().pattern &&
                         !(report.forced->value == report.quantum_class(scenario.experiments.size() - 1));

  const std::uint64_t models = scenario.catalog.model_count();
  if (options.skip_enumeration) {
    report.exhaustive_note = "exhaustive stage skipped on request";
  } else if (models > options.model_limit) {
    report.exhaustive_note = "exhaustive stage skipped: " + std::to_string(scenario.ports) + "^" +
                             std::to_string(scenario.catalog.cell_count()) + " models exceed the limit of " +
                             std::to_string(options.model_limit);
  } else {
    const auto start = std::chrono::steady_clock::now();
    ExhaustiveEvidence evidence;
    SearchResult premise_search = count_satisfying(scenario.catalog, premises, options.model_limit);
    const SearchResult full_search = count_satisfying(scenario.catalog, scenario.all_constraints(), options.model_limit);
    evidence.total_models = premise_search.total_models;
    evidence.premise_models = premise_search.count;
    evidence.premise_witness = std::move(premise_search.witness);
    evidence.all_models = full_search.count;
    evidence.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report.exhaustive = std::move(evidence);
  }
  return report;
}

ContradictionReport run_paradox(int particles, const RunOptions& options) {
  return run_paradox(build_scenario(particles), options);
}

}  // namespace ghzmp
