#include "scenario.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "ghzmp/errors.hpp"
#include "ghzmp/multiport.hpp"

namespace ghzmp::cli {
namespace {

std::string summarize(const std::vector<Diagnostic>& diagnostics) {
  std::ostringstream out;
  out << diagnostics.size() << " scenario error(s)";
  if (!diagnostics.empty()) out << "; first: " << diagnostics.front().code << ": " << diagnostics.front().message;
  return out.str();
}

int line_of(const YAML::Node& node) {
  const YAML::Mark mark = node.Mark();
  return mark.is_null() ? 0 : mark.line + 1;
}

class Reader {
 public:
  void error(std::string code, const YAML::Node& at, std::string message) {
    diagnostics_.push_back({std::move(code), line_of(at), std::move(message)});
  }
  void error(std::string code, int line, std::string message) {
    diagnostics_.push_back({std::move(code), line, std::move(message)});
  }
  void note(const YAML::Node& at, const std::string& message) {
    notes_.push_back("line " + std::to_string(line_of(at)) + ": " + message);
  }

  bool failed() const { return !diagnostics_.empty(); }
  std::vector<Diagnostic> take_diagnostics() { return std::move(diagnostics_); }
  std::vector<std::string> take_notes() { return std::move(notes_); }

  void check_fields(const YAML::Node& map, const std::set<std::string>& allowed, const std::string& where) {
    for (const auto& kv : map) {
      const auto key = kv.first.as<std::string>();
      if (!allowed.contains(key)) error("E_UNKNOWN_FIELD", kv.first, "unknown field \"" + key + "\" in " + where);
    }
  }

  template <typename T>
  std::optional<T> integer(const YAML::Node& node, const std::string& name) {
    if (!node.IsScalar()) {
      error("E_TYPE", node, name + " must be an integer");
      return std::nullopt;
    }
    try {
      return node.as<T>();
    } catch (const YAML::BadConversion&) {
      error("E_TYPE", node, name + " must be an integer, got \"" + node.Scalar() + "\"");
      return std::nullopt;
    }
  }

  std::optional<PhaseAngle> phase(const YAML::Node& node, const std::string& where) {
    if (!node.IsScalar()) {
      error("E_TYPE", node, where + " must be a number of radians or a \"p/q\" string");
      return std::nullopt;
    }
    try {
      const ParsedPhase parsed = parse_phase(node.Scalar());
      if (parsed.normalized) {
        note(node, where + " \"" + node.Scalar() + "\" normalized to " + parsed.angle.to_string() + " of 2pi");
      }
      return parsed.angle;
    } catch (const RationalOverflow& e) {
      error("E_RATIONAL", node, where + ": " + e.what());
    } catch (const InvalidArgument& e) {
      error("E_PHASE", node, where + ": " + e.what());
    }
    return std::nullopt;
  }

  /// A row of exactly `ports` angles.
  std::optional<std::vector<PhaseAngle>> row(const YAML::Node& node, int ports, const std::string& where) {
    if (!node.IsSequence()) {
      error("E_TYPE", node, where + " must be a list of " + std::to_string(ports) + " phases");
      return std::nullopt;
    }
    if (node.size() != static_cast<std::size_t>(ports)) {
      error("E_SHAPE", node,
            where + " has " + std::to_string(node.size()) + " entries, ports = " + std::to_string(ports));
      return std::nullopt;
    }
    std::vector<PhaseAngle> out;
    bool ok = true;
    for (std::size_t m = 0; m < node.size(); ++m) {
      auto a = phase(node[m], where + " entry " + std::to_string(m + 1));
      if (a) out.push_back(*a);
      else ok = false;
    }
    if (!ok) return std::nullopt;
    return out;
  }

 private:
  std::vector<Diagnostic> diagnostics_;
  std::vector<std::string> notes_;
};

std::optional<std::vector<std::vector<PhaseAngle>>> read_rows(Reader& r, const YAML::Node& node, int ports,
                                                              const std::string& where) {
  if (!node.IsSequence() || node.size() == 0) {
    r.error("E_TYPE", node, where + " must be a non-empty list of phase rows");
    return std::nullopt;
  }
  std::vector<std::vector<PhaseAngle>> rows;
  bool ok = true;
  for (std::size_t i = 0; i < node.size(); ++i) {
    auto row = r.row(node[i], ports, where + " row " + std::to_string(i + 1));
    if (row) rows.push_back(std::move(*row));
    else ok = false;
  }
  if (!ok) return std::nullopt;
  return rows;
}

std::optional<LhvBlock> read_lhv(Reader& r, const YAML::Node& node, int particles, int ports) {
  if (!node.IsMap()) {
    r.error("E_TYPE", node, "lhv must be a mapping");
    return std::nullopt;
  }
  r.check_fields(node, {"settings", "station_settings", "constraints"}, "lhv");

  std::optional<SettingsCatalog> catalog;
  const YAML::Node shared = node["settings"];
  const YAML::Node per_station = node["station_settings"];
  if (shared && per_station) {
    r.error("E_CONFLICT", node, "lhv takes either settings or station_settings, not both");
  } else if (shared) {
    if (auto rows = read_rows(r, shared, ports, "lhv settings")) {
      catalog = SettingsCatalog::shared(particles, ports, std::move(*rows));
    }
  } else if (per_station) {
    if (!per_station.IsSequence() || per_station.size() != static_cast<std::size_t>(particles)) {
      r.error("E_SHAPE", per_station, "lhv station_settings needs one list of settings per particle (" +
                                          std::to_string(particles) + ")");
    } else {
      std::vector<std::vector<SettingsCatalog::Setting>> stations;
      bool ok = true;
      for (std::size_t l = 0; l < per_station.size(); ++l) {
        auto rows = read_rows(r, per_station[l], ports, "lhv station " + std::to_string(l + 1) + " settings");
        if (rows) stations.push_back(std::move(*rows));
        else ok = false;
      }
      if (ok) catalog = SettingsCatalog(ports, std::move(stations));
    }
  } else {
    r.error("E_MISSING_FIELD", node, "lhv needs settings or station_settings");
  }

  const YAML::Node list = node["constraints"];
  if (!list) {
    r.error("E_MISSING_FIELD", node, "lhv needs a constraints list");
    return std::nullopt;
  }
  if (!list.IsSequence()) {
    r.error("E_TYPE", list, "lhv constraints must be a list");
    return std::nullopt;
  }

  std::vector<Constraint> constraints;
  for (std::size_t c = 0; c < list.size(); ++c) {
    const YAML::Node item = list[c];
    const std::string where = "constraint " + std::to_string(c + 1);
    if (!item.IsMap()) {
      r.error("E_TYPE", item, where + " must be a mapping with pattern and class");
      continue;
    }
    r.check_fields(item, {"pattern", "class"}, where);
    const YAML::Node pattern_node = item["pattern"];
    if (!pattern_node || !pattern_node.IsSequence()) {
      r.error("E_MISSING_FIELD", item, where + " needs a pattern list of setting indices");
      continue;
    }
    if (pattern_node.size() != static_cast<std::size_t>(particles)) {
      r.error("E_SHAPE", pattern_node, where + " pattern has " + std::to_string(pattern_node.size()) +
                                           " entries, particles = " + std::to_string(particles));
      continue;
    }
    std::vector<int> pattern;
    bool ok = true;
    for (std::size_t l = 0; l < pattern_node.size(); ++l) {
      const auto v = r.integer<int>(pattern_node[l], where + " pattern entry");
      if (!v) {
        ok = false;
        continue;
      }
      if (catalog && (*v < 0 || *v >= catalog->settings(static_cast<int>(l)))) {
        r.error("E_CONSTRAINT", pattern_node[l], where + " uses setting " + std::to_string(*v) + " at station " +
                                                     std::to_string(l + 1) + ", which offers settings 0.." +
                                                     std::to_string(catalog->settings(static_cast<int>(l)) - 1));
        ok = false;
      }
      pattern.push_back(*v);
    }
    if (!ok || !catalog) continue;

    if (const YAML::Node cls = item["class"]) {
      const auto k = r.integer<int>(cls, where + " class");
      if (!k) continue;
      if (*k < 0 || *k >= ports) {
        r.error("E_RANGE", cls, where + " class " + std::to_string(*k) + " outside 0.." + std::to_string(ports - 1));
        continue;
      }
      constraints.push_back({std::move(pattern), Residue(*k, ports)});
    } else {
      const auto k = perfect_correlation_class({particles, ports}, catalog->settings_for(pattern));
      if (!k) {
        r.error("E_NOT_PERFECT", item, where + " has no class and its settings give no perfect correlation");
        continue;
      }
      r.note(item, where + " class taken from the quantum prediction: " + std::to_string(k->value()));
      constraints.push_back({std::move(pattern), *k});
    }
  }
  if (!catalog) return std::nullopt;
  return LhvBlock{std::move(*catalog), std::move(constraints)};
}

std::optional<SamplingBlock> read_sampling(Reader& r, const YAML::Node& node) {
  if (!node.IsMap()) {
    r.error("E_TYPE", node, "sampling must be a mapping");
    return std::nullopt;
  }
  r.check_fields(node, {"shots", "seed"}, "sampling");
  SamplingBlock out;
  if (const YAML::Node shots = node["shots"]) {
    if (shots.IsScalar() && !shots.Scalar().empty() && shots.Scalar().front() == '-') {
      r.error("E_RANGE", shots, "sampling shots must be positive");
    } else if (const auto v = r.integer<std::uint64_t>(shots, "sampling shots")) {
      if (*v == 0) r.error("E_RANGE", shots, "sampling shots must be positive");
      out.shots = *v;
    }
  }
  if (const YAML::Node seed = node["seed"]) {
    if (seed.IsScalar() && !seed.Scalar().empty() && seed.Scalar().front() == '-') {
      r.error("E_RANGE", seed, "sampling seed must be non-negative");
    } else if (const auto v = r.integer<std::uint64_t>(seed, "sampling seed")) {
      out.seed = *v;
    }
  }
  return out;
}

}  // namespace

ScenarioError::ScenarioError(std::vector<Diagnostic> diagnostics)
    : std::runtime_error(summarize(diagnostics)), diagnostics_(std::move(diagnostics)) {}

Scenario parse_scenario_text(std::string_view text) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::Exception& e) {
    throw ScenarioError({{"E_SYNTAX", e.mark.is_null() ? 0 : e.mark.line + 1, e.msg}});
  }
  if (!root.IsMap()) throw ScenarioError({{"E_SYNTAX", line_of(root), "scenario must be a mapping"}});

  Reader r;
  r.check_fields(root, {"schema", "particles", "ports", "phases", "lhv", "sampling"}, "scenario");

  if (const YAML::Node schema = root["schema"]) {
    if (!schema.IsScalar() || schema.Scalar() != kScenarioSchema) {
      r.error("E_SCHEMA", schema, "unsupported schema \"" + (schema.IsScalar() ? schema.Scalar() : std::string("?")) +
                                      "\", expected \"" + std::string(kScenarioSchema) + "\"");
    }
  } else {
    r.error("E_SCHEMA", 0, "missing schema field (expected \"" + std::string(kScenarioSchema) + "\")");
  }

  int particles = 0;  // 0 until read and valid
  if (const YAML::Node n = root["particles"]) {
    if (const auto v = r.integer<int>(n, "particles"); v && *v < 1) {
      r.error("E_RANGE", n, "particles must be >= 1");
    } else if (v) {
      particles = *v;
    }
  } else {
    r.error("E_MISSING_FIELD", 0, "missing particles field");
  }
  int ports = 0;
  if (const YAML::Node n = root["ports"]) {
    if (const auto v = r.integer<int>(n, "ports"); v && (*v < 2 || *v > kMaxPorts)) {
      r.error("E_RANGE", n, "ports must lie in 2.." + std::to_string(kMaxPorts));
    } else if (v) {
      ports = *v;
    }
  } else {
    r.error("E_MISSING_FIELD", 0, "missing ports field");
  }

  std::optional<PhaseSettings> phases;
  const YAML::Node phase_node = root["phases"];
  if (!phase_node) {
    r.error("E_MISSING_FIELD", 0, "missing phases field");
  } else if (particles > 0 && ports > 0) {
    if (phase_node.IsSequence() && phase_node.size() != static_cast<std::size_t>(particles)) {
      r.error("E_SHAPE", phase_node, "phases has " + std::to_string(phase_node.size()) + " rows, particles = " +
                                         std::to_string(particles));
    } else if (auto rows = read_rows(r, phase_node, ports, "phases")) {
      phases = PhaseSettings(std::move(*rows));
    }
  }

  std::optional<LhvBlock> lhv;
  if (const YAML::Node n = root["lhv"]; n && particles > 0 && ports > 0) lhv = read_lhv(r, n, particles, ports);
  std::optional<SamplingBlock> sampling;
  if (const YAML::Node n = root["sampling"]) sampling = read_sampling(r, n);

  if (r.failed()) throw ScenarioError(r.take_diagnostics());
  return Scenario{{particles, ports}, std::move(phases).value(), std::move(lhv), sampling, r.take_notes()};
}

Scenario parse_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ScenarioError({{"E_FILE", 0, "cannot read scenario file " + path.string()}});
  std::ostringstream text;
  text << in.rdbuf();
  return parse_scenario_text(text.str());
}

namespace {

nlohmann::ordered_json angle_json(const PhaseAngle& a) {
  if (a.is_exact()) return a.to_string();
  return a.radians();
}

nlohmann::ordered_json rows_json(const std::vector<std::vector<PhaseAngle>>& rows) {
  auto out = nlohmann::ordered_json::array();
  for (const auto& row : rows) {
    auto r = nlohmann::ordered_json::array();
    for (const auto& a : row) r.push_back(angle_json(a));
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace

nlohmann::ordered_json scenario_to_json(const Scenario& s) {
  nlohmann::ordered_json out;
  out["schema"] = kScenarioSchema;
  out["particles"] = s.config.particles;
  out["ports"] = s.config.ports;
  out["phases"] = rows_json(s.phases.rows());
  if (s.lhv) {
    const SettingsCatalog& cat = s.lhv->catalog;
    std::vector<std::vector<SettingsCatalog::Setting>> stations;
    for (int l = 0; l < cat.stations(); ++l) {
      std::vector<SettingsCatalog::Setting> rows;
      for (int i = 0; i < cat.settings(l); ++i) rows.push_back(cat.setting(l, i));
      stations.push_back(std::move(rows));
    }
    nlohmann::ordered_json lhv;
    bool uniform = true;
    for (const auto& st : stations) uniform = uniform && st == stations.front();
    if (uniform) {
      lhv["settings"] = rows_json(stations.front());
    } else {
      auto per = nlohmann::ordered_json::array();
      for (const auto& st : stations) per.push_back(rows_json(st));
      lhv["station_settings"] = std::move(per);
    }
    auto constraints = nlohmann::ordered_json::array();
    for (const Constraint& c : s.lhv->constraints) {
      constraints.push_back({{"pattern", c.pattern}, {"class", c.required.value()}});
    }
    lhv["constraints"] = std::move(constraints);
    out["lhv"] = std::move(lhv);
  }
  if (s.sampling) out["sampling"] = {{"shots", s.sampling->shots}, {"seed", s.sampling->seed}};
  return out;
}

}  // namespace ghzmp::cli
