#include "commands.hpp"

#include <chrono>
#include <iomanip>
#include <optional>
#include <sstream>
#include <vector>

#include "CLI11.hpp"
#include "ghzmp/errors.hpp"
#include "ghzmp/lhv.hpp"
#include "ghzmp/multiport.hpp"
#include "ghzmp/paradox.hpp"
#include "ghzmp/quantum.hpp"
#include "report.hpp"
#include "scenario.hpp"

namespace ghzmp::cli {
namespace {

using Json = nlohmann::ordered_json;

constexpr double kUnitarityTolerance = 1e-12;

// Raised after output when a paradox report does not verify.
struct ParadoxMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Json one_based(const std::vector<int>& detectors) {
  Json out = Json::array();
  for (const int k : detectors) out.push_back(k + 1);
  return out;
}

std::string detectors_text(const std::vector<int>& detectors) {
  std::string out;
  for (const int k : detectors) out += (out.empty() ? "" : " ") + std::to_string(k + 1);
  return out;
}

std::string row_text(std::span<const PhaseAngle> row) {
  std::string out = "(";
  for (std::size_t m = 0; m < row.size(); ++m) {
    if (m) out += ", ";
    out += row[m].is_exact() ? row[m].turns()->to_string() : format_real(row[m].radians());
  }
  return out + ")";
}

void print_settings(std::ostream& os, const PhaseSettings& s) {
  os << "phases (p/q of 2π, or radians):\n";
  for (int l = 0; l < s.stations(); ++l) os << "  station " << l + 1 << ": " << row_text(s.station(l)) << '\n';
}

void print_notes(const Scenario& s, std::ostream& err) {
  for (const auto& n : s.notes) err << "ghzmp: note: " << n << '\n';
}

// --- multiport -------------------------------------------------------------

void run_multiport(int ports, Output& out) {
  const MultiportMatrix u = bell_multiport(ports);
  const bool unitary = verify_unitarity(u, kUnitarityTolerance);
  if (!out.text()) {
    out.meta("multiport", {{"ports", ports}});
    for (int m = 0; m < ports; ++m) {
      Json entries = Json::array();
      for (int mp = 0; mp < ports; ++mp) entries.push_back({u(m, mp).real(), u(m, mp).imag()});
      out.record({{"record", "row"}, {"input", m + 1}, {"entries", std::move(entries)}});
    }
    out.record({{"record", "check"}, {"unitary", unitary}, {"tolerance", kUnitarityTolerance}});
    return;
  }
  auto& os = out.stream();
  os << "Bell multiport, M = " << ports << " (rows: input port, columns: exit port)\n";
  std::vector<std::vector<std::string>> cells(static_cast<std::size_t>(ports));
  std::size_t width = 0;
  for (int m = 0; m < ports; ++m) {
    for (int mp = 0; mp < ports; ++mp) {
      cells[static_cast<std::size_t>(m)].push_back(format_complex(u(m, mp)));
      width = std::max(width, cells[static_cast<std::size_t>(m)].back().size());
    }
  }
  os << std::setw(6) << "";
  for (int mp = 0; mp < ports; ++mp) os << "  " << std::left << std::setw(static_cast<int>(width)) << ("out " + std::to_string(mp + 1));
  os << std::right << '\n';
  for (int m = 0; m < ports; ++m) {
    os << std::left << std::setw(6) << ("in " + std::to_string(m + 1));
    for (const auto& c : cells[static_cast<std::size_t>(m)]) os << "  " << std::setw(static_cast<int>(width)) << c;
    os << std::right << '\n';
  }
  os << "unitary and evenly splitting (tol " << kUnitarityTolerance << "): " << (unitary ? "yes" : "no") << '\n';
}

// --- probability -----------------------------------------------------------

void run_probability(const Scenario& s, Output& out) {
  const OutcomeDistribution table = full_distribution(s.config, s.phases);
  if (!out.text()) {
    out.meta("probability", scenario_to_json(s));
    for (std::size_t i = 0; i < table.size(); ++i) {
      out.record({{"record", "outcome"}, {"detectors", one_based(table.outcome(i).detectors)}, {"probability", table[i]}});
    }
    out.record({{"record", "summary"}, {"outcomes", table.size()}, {"total", table.total()}});
    return;
  }
  auto& os = out.stream();
  os << "joint detection probabilities, N = " << s.config.particles << ", M = " << s.config.ports << '\n';
  print_settings(os, s.phases);
  const int width = std::max(9, 2 * s.config.particles);
  os << std::left << std::setw(width) << "detectors" << "  probability\n";
  for (std::size_t i = 0; i < table.size(); ++i) {
    os << std::setw(width) << detectors_text(table.outcome(i).detectors) << "  " << format_real(table[i]) << '\n';
  }
  os << std::right << "total: " << format_real(table.total()) << " over " << table.size() << " outcomes\n";
}

// --- correlate -------------------------------------------------------------

void run_correlate(const Scenario& s, Output& out) {
  const CorrelationValue closed = correlation_closed(s.config, s.phases);
  const auto perfect = perfect_correlation_class(s.config, s.phases);
  const std::vector<PhaseAngle> exponents = correlation_exponents(s.config, s.phases);
  std::optional<CorrelationValue> brute;
  std::string brute_note;
  if (s.config.outcome_count() <= kMaxOutcomes) {
    brute = correlation_brute(s.config, s.phases);
  } else {
    brute_note = "skipped: " + std::to_string(s.config.ports) + "^" + std::to_string(s.config.particles) +
                 " outcomes exceed the enumeration limit of " + std::to_string(kMaxOutcomes);
  }

  if (!out.text()) {
    out.meta("correlate", scenario_to_json(s));
    Json exps = Json::array();
    for (const auto& e : exponents) exps.push_back(e.is_exact() ? Json(e.turns()->to_string()) : Json(e.radians()));
    Json closed_rec{{"record", "closed_form"}, {"E", complex_json(closed.value)}, {"exponents", std::move(exps)}};
    closed_rec["exact_class"] = closed.exact_class ? residue_json(*closed.exact_class) : Json(nullptr);
    closed_rec["perfect_class"] = perfect ? residue_json(*perfect) : Json(nullptr);
    out.record(closed_rec);
    if (brute) {
      out.record({{"record", "brute_force"},
                  {"E", complex_json(brute->value)},
                  {"abs_difference", std::abs(brute->value - closed.value)}});
    } else {
      out.record({{"record", "brute_force"}, {"skipped", true}, {"note", brute_note}});
    }
    return;
  }
  auto& os = out.stream();
  os << "correlation function, N = " << s.config.particles << ", M = " << s.config.ports << '\n';
  print_settings(os, s.phases);
  os << "exponents sum_l (phi_l^m - phi_l^(m+1)):\n";
  for (std::size_t m = 0; m < exponents.size(); ++m) {
    os << "  m = " << m + 1 << ": " << format_angle(exponents[m]) << '\n';
  }
  os << "closed form  E = " << format_complex(closed.value) << "  (|E| = " << format_real(std::abs(closed.value)) << ")\n";
  if (brute) {
    os << "brute force  E = " << format_complex(brute->value)
       << "  (|difference| = " << std::scientific << std::setprecision(3) << std::abs(brute->value - closed.value)
       << std::defaultfloat << std::setprecision(6) << ")\n";
  } else {
    os << "brute force  " << brute_note << '\n';
  }
  os << "exact class: " << (closed.exact_class ? format_class(*closed.exact_class) : std::string("none")) << '\n';
  os << "perfect correlation: " << (perfect ? format_class(*perfect) : std::string("no")) << '\n';
}

// --- sample ----------------------------------------------------------------

void run_sample(const Scenario& s, std::uint64_t shots, std::uint64_t seed, Output& out) {
  const SampleResult result = sample_outcomes(s.config, s.phases, shots, seed);
  const CorrelationValue exact = correlation_closed(s.config, s.phases);
  const OutcomeDistribution shape(s.config, std::vector<double>(result.counts.size()));
  if (!out.text()) {
    out.meta("sample", scenario_to_json(s), {{"generator", result.generator}, {"seed", seed}, {"shots", shots}});
    for (std::size_t i = 0; i < result.counts.size(); ++i) {
      if (result.counts[i] == 0) continue;
      out.record({{"record", "count"}, {"detectors", one_based(shape.outcome(i).detectors)}, {"count", result.counts[i]}});
    }
    out.record({{"record", "estimate"}, {"E", complex_json(result.estimate.value)}, {"closed_form", complex_json(exact.value)}});
    return;
  }
  auto& os = out.stream();
  os << "sampled detections, N = " << s.config.particles << ", M = " << s.config.ports << '\n';
  os << "generator: " << result.generator << ", seed: " << seed << ", shots: " << shots << '\n';
  const int width = std::max(9, 2 * s.config.particles);
  os << std::left << std::setw(width) << "detectors" << "  count\n";
  for (std::size_t i = 0; i < result.counts.size(); ++i) {
    if (result.counts[i] == 0) continue;
    os << std::setw(width) << detectors_text(shape.outcome(i).detectors) << "  " << result.counts[i] << '\n';
  }
  os << std::right;
  os << "estimated E = " << format_complex(result.estimate.value) << '\n';
  os << "closed form E = " << format_complex(exact.value) << '\n';
}

// --- lhv-search ------------------------------------------------------------

void run_lhv_search(const Scenario& s, Output& out) {
  if (!s.lhv) throw ScenarioError({{"E_MISSING_FIELD", 0, "lhv-search needs an lhv block in the scenario"}});
  const LhvBlock& lhv = *s.lhv;
  const auto start = std::chrono::steady_clock::now();
  const SearchResult search = count_satisfying(lhv.catalog, lhv.constraints);
  const auto forced = ghz_forced_value(lhv.constraints, lhv.catalog);
  const auto conflict = find_algebraic_conflict(lhv.constraints, lhv.catalog);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  if (!out.text()) {
    out.meta("lhv-search", scenario_to_json(s));
    Json counts{{"record", "search"}, {"total_models", search.total_models}, {"satisfying", search.count}};
    if (out.timings()) counts["seconds"] = seconds;
    out.record(counts);
    if (search.witness) {
      Json table = Json::array();
      for (int l = 0; l < search.witness->stations(); ++l) {
        Json row = Json::array();
        for (int i = 0; i < search.witness->settings(l); ++i) row.push_back(search.witness->value(l, i).value());
        table.push_back(std::move(row));
      }
      out.record({{"record", "witness"}, {"table", std::move(table)}});
    }
    Json f{{"record", "forced"}};
    f["pattern"] = forced ? Json(forced->pattern) : Json(nullptr);
    f["value"] = forced ? residue_json(forced->value) : Json(nullptr);
    out.record(f);
    Json c{{"record", "conflict"}};
    if (conflict) {
      c["constraint"] = conflict->constraint_index + 1;
      c["forced_by_others"] = residue_json(conflict->forced.value);
      c["required"] = residue_json(lhv.constraints[conflict->constraint_index].required);
    } else {
      c["constraint"] = nullptr;
    }
    out.record(c);
    return;
  }
  auto& os = out.stream();
  const int M = lhv.catalog.ports();
  os << "deterministic LHV search, " << lhv.catalog.stations() << " stations, M = " << M << '\n';
  for (int l = 0; l < lhv.catalog.stations(); ++l) {
    os << "  station " << l + 1 << " settings:";
    for (int i = 0; i < lhv.catalog.settings(l); ++i) os << ' ' << i << '=' << row_text(lhv.catalog.setting(l, i));
    os << '\n';
  }
  os << "constraints (setting index per station -> required class):\n";
  for (std::size_t c = 0; c < lhv.constraints.size(); ++c) {
    os << "  " << c + 1 << ": [";
    for (std::size_t l = 0; l < lhv.constraints[c].pattern.size(); ++l) os << (l ? " " : "") << lhv.constraints[c].pattern[l];
    os << "] -> " << format_class(lhv.constraints[c].required) << '\n';
  }
  os << "models enumerated: " << search.total_models << '\n';
  os << "models satisfying all constraints: " << search.count << '\n';
  if (search.witness) {
    os << "witness (detector label per setting, 1-based):\n";
    for (int l = 0; l < search.witness->stations(); ++l) {
      os << "  station " << l + 1 << ':';
      for (int i = 0; i < search.witness->settings(l); ++i) {
        os << " setting " << i << " -> " << search.witness->value(l, i).value() + 1;
      }
      os << '\n';
    }
  } else {
    os << "witness: none\n";
  }
  if (forced) {
    os << "forced value: product over pattern [";
    for (std::size_t l = 0; l < forced->pattern.size(); ++l) os << (l ? " " : "") << forced->pattern[l];
    os << "] = " << format_class(forced->value) << '\n';
  } else {
    os << "forced value: not derivable from all constraints together\n";
  }
  if (conflict) {
    os << "algebraic conflict: constraint " << conflict->constraint_index + 1 << " requires "
       << format_class(lhv.constraints[conflict->constraint_index].required) << ", the others force "
       << format_class(conflict->forced.value) << '\n';
  }
  os << "wall-clock: " << std::fixed << std::setprecision(6) << seconds << " s\n" << std::defaultfloat;
}

// --- paradox ---------------------------------------------------------------

// Left-justify by display columns; the labels carry multi-byte ψ and γ.
std::string pad(const std::string& text, std::size_t columns) {
  std::size_t shown = 0;
  for (const unsigned char c : text) shown += (c & 0xC0) != 0x80;
  return text + std::string(columns > shown ? columns - shown : 0, ' ');
}

std::string pattern_text(const std::vector<int>& pattern) {
  std::string out;
  for (const int p : pattern) out += (out.empty() ? "" : " ") + std::string(p == kReferenceSetting ? "ψ'" : "ψ ");
  return out;
}

void run_paradox_command(int particles, bool skip_enumeration, Output& out) {
  RunOptions options;
  options.skip_enumeration = skip_enumeration;
  const ContradictionReport report = run_paradox(particles, options);
  const ParadoxScenario& sc = report.scenario;
  const std::size_t test = sc.experiments.size() - 1;
  const std::string evidence = report.exhaustive ? "algebraic+exhaustive" : "algebraic";

  // What the LHV side must assign to each experiment: premises are imposed,
  // the test experiment gets the forced value.
  auto lhv_class = [&](std::size_t i) -> std::optional<Residue> {
    if (i < test) return sc.experiments[i].expected;
    if (report.forced && report.forced->pattern == sc.experiments[i].pattern) return report.forced->value;
    return std::nullopt;
  };

  if (!out.text()) {
    Json settings{{"graded", Json::array()}, {"reference", Json::array()}};
    for (const auto& a : sc.catalog.setting(0, kGradedSetting)) settings["graded"].push_back(a.to_string());
    for (const auto& a : sc.catalog.setting(0, kReferenceSetting)) settings["reference"].push_back(a.to_string());
    out.meta("paradox", {{"particles", particles}, {"skip_enumeration", skip_enumeration}},
             {{"ports", sc.ports}, {"delta", sc.delta.to_string()}, {"settings", settings}});
    for (std::size_t i = 0; i < sc.experiments.size(); ++i) {
      const auto lhv = lhv_class(i);
      out.record({{"record", "experiment"},
                  {"index", i + 1},
                  {"label", sc.experiments[i].label},
                  {"pattern", sc.experiments[i].pattern},
                  {"E", complex_json(report.quantum[i].value)},
                  {"quantum_class", residue_json(report.quantum_class(i))},
                  {"lhv_class", lhv ? residue_json(*lhv) : Json(nullptr)}});
    }
    if (report.exhaustive) {
      Json ex{{"record", "exhaustive"},
              {"skipped", false},
              {"total_models", report.exhaustive->total_models},
              {"premise_models", report.exhaustive->premise_models},
              {"all_models", report.exhaustive->all_models}};
      if (out.timings()) ex["seconds"] = report.exhaustive->seconds;
      out.record(ex);
    } else {
      out.record({{"record", "exhaustive"}, {"skipped", true}, {"note", report.exhaustive_note}});
    }
    out.record({{"record", "verdict"},
                {"contradiction", report.contradiction},
                {"verified", report.verified()},
                {"evidence", evidence}});
  } else {
    auto& os = out.stream();
    os << "GHZ paradox, N = " << sc.particles << " particles, M = " << sc.ports << " ports, δ = "
       << sc.delta.to_string() << " of 2π\n";
    os << "  ψ  = " << row_text(sc.catalog.setting(0, kGradedSetting)) << " of 2π\n";
    os << "  ψ' = " << row_text(sc.catalog.setting(0, kReferenceSetting)) << " of 2π\n";
    std::size_t label_width = 10;
    for (const auto& e : sc.experiments) label_width = std::max(label_width, e.label.size());
    const std::size_t pattern_width = std::max<std::size_t>(8, 3 * static_cast<std::size_t>(sc.particles) - 1);
    os << pad("experiment", label_width) << "  " << pad("settings", pattern_width) << "  " << pad("quantum", 8) << "  "
       << pad("LHV", 8) << "  E\n";
    for (std::size_t i = 0; i < sc.experiments.size(); ++i) {
      const auto lhv = lhv_class(i);
      os << pad(sc.experiments[i].label, label_width) << "  " << pad(pattern_text(sc.experiments[i].pattern), pattern_width)
         << "  " << pad(format_class(report.quantum_class(i)), 8) << "  "
         << pad(lhv ? format_class(*lhv) : std::string("-"), 8) << "  " << format_complex(report.quantum[i].value) << '\n';
    }
    if (report.forced) {
      os << "algebraic: multiplying the " << sc.premises().size() << " swap constraints forces the all-ψ' product to "
         << format_class(report.forced->value) << '\n';
    } else {
      os << "algebraic: no forced value\n";
    }
    if (report.exhaustive) {
      os << "exhaustive: " << report.exhaustive->total_models << " deterministic models; "
         << report.exhaustive->premise_models << " satisfy the swap constraints; " << report.exhaustive->all_models
         << " satisfy all " << sc.experiments.size() << '\n';
    } else {
      os << report.exhaustive_note << '\n';
    }
    os << "contradiction: quantum " << format_class(report.quantum_class(test)) << " vs LHV-forced "
       << (report.forced ? format_class(report.forced->value) : std::string("-")) << " at all ψ' => "
       << (report.verified() ? "verified" : "NOT verified") << " (" << evidence << ")\n";
  }
  if (!report.verified()) throw ParadoxMismatch("paradox report for N = " + std::to_string(particles) + " did not verify");
}

// --- dispatch --------------------------------------------------------------

void error_line(std::ostream& err, std::string_view code, const std::string& message) {
  err << "ghzmp: error[" << code << "]: " << message << '\n';
}

}  // namespace

int dispatch(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quantum predictions and GHZ contradictions for Bell multiport experiments", "ghzmp"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));

  std::string format = "text";
  bool timings = false;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "records"}));
    sub->add_flag("--timings", timings, "Include wall-clock timings in records");
  };

  int ports = 0;
  auto* multiport = app.add_subcommand("multiport", "Print a Bell multiport matrix");
  multiport->add_option("--ports,-M", ports, "Number of ports M")->required();
  add_common(multiport);

  std::string file;
  auto* probability = app.add_subcommand("probability", "Full joint detection probability table");
  probability->add_option("scenario", file, "Scenario file")->required();
  add_common(probability);

  auto* correlate = app.add_subcommand("correlate", "Correlation function: closed form, brute force, exact class");
  correlate->add_option("scenario", file, "Scenario file")->required();
  add_common(correlate);

  std::optional<std::uint64_t> shots;
  std::optional<std::uint64_t> seed;
  auto* sample = app.add_subcommand("sample", "Seeded Monte Carlo detections");
  sample->add_option("scenario", file, "Scenario file")->required();
  sample->add_option("--shots", shots, "Number of detection events")->check(CLI::PositiveNumber);
  sample->add_option("--seed", seed, "Generator seed");
  add_common(sample);

  auto* lhv = app.add_subcommand("lhv-search", "Exhaustive deterministic hidden-variable search");
  lhv->add_option("scenario", file, "Scenario file with an lhv block")->required();
  add_common(lhv);

  int particles = 0;
  bool skip_enumeration = false;
  auto* paradox = app.add_subcommand("paradox", "N = M+1 GHZ paradox report");
  paradox->add_option("--N,-N", particles, "Number of particles (>= 4)")->required();
  paradox->add_flag("--skip-enumeration", skip_enumeration, "Run only the algebraic LHV stage");
  add_common(paradox);

  std::vector<const char*> argv{"ghzmp"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    error_line(err, "E_USAGE", e.what());
    err << app.help();
    return kExitUsage;
  }

  Output output(out, format == "records" ? Format::records : Format::text, timings);
  const bool is_paradox = paradox->parsed();
  try {
    if (multiport->parsed()) {
      run_multiport(ports, output);
    } else if (is_paradox) {
      run_paradox_command(particles, skip_enumeration, output);
    } else {
      const Scenario s = parse_scenario(file);
      print_notes(s, err);
      if (probability->parsed()) run_probability(s, output);
      else if (correlate->parsed()) run_correlate(s, output);
      else if (lhv->parsed()) run_lhv_search(s, output);
      else if (sample->parsed()) {
        const SamplingBlock defaults = s.sampling.value_or(SamplingBlock{});
        run_sample(s, shots.value_or(defaults.shots), seed.value_or(defaults.seed), output);
      }
    }
  } catch (const ScenarioError& e) {
    for (const Diagnostic& d : e.diagnostics()) {
      err << "ghzmp: error[" << d.code << "] " << file;
      if (d.line > 0) err << ':' << d.line;
      err << ": " << d.message << '\n';
    }
    return kExitInputError;
  } catch (const ResourceLimit& e) {
    error_line(err, "E_RESOURCE_LIMIT", e.what());
    return kExitResourceLimit;
  } catch (const ParadoxMismatch& e) {
    error_line(err, "E_PARADOX_MISMATCH", e.what());
    return kExitParadoxMismatch;
  } catch (const IntegrityError& e) {
    if (is_paradox) {
      error_line(err, "E_PARADOX_MISMATCH", e.what());
      return kExitParadoxMismatch;
    }
    error_line(err, "E_INTEGRITY", e.what());
    return kExitIntegrity;
  } catch (const RationalOverflow& e) {
    error_line(err, "E_RATIONAL", e.what());
    return kExitInputError;
  } catch (const InvalidArgument& e) {
    error_line(err, "E_INVALID_ARGUMENT", e.what());
    return kExitInputError;
  }
  return kExitOk;
}

}  // namespace ghzmp::cli
