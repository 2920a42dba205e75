#include "ghzmp/lhv.hpp"

#include <limits>
#include <string>

#include "ghzmp/errors.hpp"

namespace ghzmp {
namespace {

std::size_t as_index(int i) { return static_cast<std::size_t>(i); }

void check_constraints(const SettingsCatalog& catalog, std::span<const Constraint> constraints) {
  for (std::size_t c = 0; c < constraints.size(); ++c) {
    catalog.check_pattern(constraints[c].pattern);
    if (constraints[c].required.modulus() != catalog.ports()) {
      throw InvalidArgument("constraint " + std::to_string(c + 1) + " is mod " +
                            std::to_string(constraints[c].required.modulus()) + " but the catalog has " +
                            std::to_string(catalog.ports()) + " ports");
    }
  }
}

}  // namespace

SettingsCatalog::SettingsCatalog(int ports, std::vector<std::vector<Setting>> station_settings)
    : ports_(ports), settings_(std::move(station_settings)) {
  if (ports < 2) throw InvalidArgument("catalog needs at least 2 ports");
  if (settings_.empty()) throw InvalidArgument("catalog needs at least one station");
  offsets_.push_back(0);
  for (std::size_t l = 0; l < settings_.size(); ++l) {
    if (settings_[l].empty()) throw InvalidArgument("station " + std::to_string(l + 1) + " has no settings");
    for (const Setting& row : settings_[l]) {
      if (row.size() != as_index(ports)) {
        throw InvalidArgument("station " + std::to_string(l + 1) + " has a setting with " +
                              std::to_string(row.size()) + " phases, expected " + std::to_string(ports));
      }
    }
    offsets_.push_back(offsets_.back() + settings_[l].size());
  }
}

SettingsCatalog SettingsCatalog::shared(int stations, int ports, std::vector<Setting> settings) {
  if (stations < 1) throw InvalidArgument("catalog needs at least one station");
  return SettingsCatalog(ports, std::vector<std::vector<Setting>>(as_index(stations), settings));
}

const SettingsCatalog::Setting& SettingsCatalog::setting(int station, int index) const {
  if (station < 0 || station >= stations() || index < 0 || index >= settings(station)) {
    throw InvalidArgument("setting (" + std::to_string(station) + ", " + std::to_string(index) + ") not in catalog");
  }
  return settings_[as_index(station)][as_index(index)];
}

std::size_t SettingsCatalog::cell(int station, int index) const {
  if (station < 0 || station >= stations() || index < 0 || index >= settings(station)) {
    throw InvalidArgument("setting (" + std::to_string(station) + ", " + std::to_string(index) + ") not in catalog");
  }
  return offsets_[as_index(station)] + as_index(index);
}

std::uint64_t SettingsCatalog::model_count() const noexcept {
  std::uint64_t count = 1;
  for (std::size_t c = 0; c < cell_count(); ++c) {
    if (__builtin_mul_overflow(count, static_cast<std::uint64_t>(ports_), &count)) {
      return std::numeric_limits<std::uint64_t>::max();
    }
  }
  return count;
}

void SettingsCatalog::check_pattern(std::span<const int> pattern) const {
  if (pattern.size() != settings_.size()) {
    throw InvalidArgument("pattern has " + std::to_string(pattern.size()) + " entries, catalog has " +
                          std::to_string(settings_.size()) + " stations");
  }
  for (std::size_t l = 0; l < pattern.size(); ++l) {
    if (pattern[l] < 0 || pattern[l] >= static_cast<int>(settings_[l].size())) {
      throw InvalidArgument("pattern entry " + std::to_string(pattern[l]) + " for station " + std::to_string(l + 1) +
                            " outside [0, " + std::to_string(settings_[l].size()) + ")");
    }
  }
}

PhaseSettings SettingsCatalog::settings_for(std::span<const int> pattern) const {
  check_pattern(pattern);
  std::vector<std::vector<PhaseAngle>> rows;
  rows.reserve(pattern.size());
  for (std::size_t l = 0; l < pattern.size(); ++l) rows.push_back(settings_[l][as_index(pattern[l])]);
  return PhaseSettings(std::move(rows));
}

DeterministicModel::DeterministicModel(const SettingsCatalog& catalog)
    : DeterministicModel(catalog, std::vector<int>(catalog.cell_count(), 0)) {}

DeterministicModel::DeterministicModel(const SettingsCatalog& catalog, std::vector<int> cells)
    : ports_(catalog.ports()), cells_(std::move(cells)) {
  if (cells_.size() != catalog.cell_count()) {
    throw InvalidArgument("model has " + std::to_string(cells_.size()) + " cells, catalog has " +
                          std::to_string(catalog.cell_count()));
  }
  offsets_.push_back(0);
  for (int l = 0; l < catalog.stations(); ++l) offsets_.push_back(offsets_.back() + as_index(catalog.settings(l)));
  for (int& v : cells_) v = static_cast<int>(Residue(v, ports_).value());
}

int DeterministicModel::settings(int station) const {
  if (station < 0 || station >= stations()) throw InvalidArgument("station index out of range");
  return static_cast<int>(offsets_[as_index(station) + 1] - offsets_[as_index(station)]);
}

std::size_t DeterministicModel::cell(int station, int setting) const {
  if (setting < 0 || setting >= settings(station)) {
    throw InvalidArgument("setting " + std::to_string(setting) + " outside station " + std::to_string(station + 1) +
                          "'s catalog");
  }
  return offsets_[as_index(station)] + as_index(setting);
}

Residue DeterministicModel::value(int station, int setting) const { return Residue(cells_[cell(station, setting)], ports_); }

void DeterministicModel::set(int station, int setting, const Residue& value) {
  if (value.modulus() != ports_) throw InvalidArgument("model value has the wrong modulus");
  cells_[cell(station, setting)] = static_cast<int>(value.value());
}

Residue model_value(const DeterministicModel& model, std::span<const int> pattern) {
  if (pattern.size() != as_index(model.stations())) {
    throw InvalidArgument("pattern has " + std::to_string(pattern.size()) + " entries, model has " +
                          std::to_string(model.stations()) + " stations");
  }
  Residue sum(0, model.ports());
  for (std::size_t l = 0; l < pattern.size(); ++l) sum += model.value(static_cast<int>(l), pattern[l]);
  return sum;
}

bool satisfies(const DeterministicModel& model, std::span<const Constraint> constraints) {
  for (const Constraint& c : constraints) {
    if (!(model_value(model, c.pattern) == c.required)) return false;
  }
  return true;
}

SearchResult count_satisfying(const SettingsCatalog& catalog, std::span<const Constraint> constraints,
                              std::uint64_t limit) {
  check_constraints(catalog, constraints);
  const std::uint64_t total = catalog.model_count();
  if (total > limit) {
    throw ResourceLimit("count_satisfying: " + std::to_string(catalog.ports()) + "^" +
                            std::to_string(catalog.cell_count()) + " models exceed the limit of " +
                            std::to_string(limit),
                        total, limit);
  }

  const int M = catalog.ports();
  const std::size_t cells = catalog.cell_count();

  // Constraints touching each cell; a constraint uses each station once.
  std::vector<std::vector<std::size_t>> touching(cells);
  for (std::size_t c = 0; c < constraints.size(); ++c) {
    for (std::size_t l = 0; l < constraints[c].pattern.size(); ++l) {
      touching[catalog.cell(static_cast<int>(l), constraints[c].pattern[l])].push_back(c);
    }
  }
  std::vector<int> required(constraints.size());
  for (std::size_t c = 0; c < constraints.size(); ++c) required[c] = static_cast<int>(constraints[c].required.value());

  // Odometer over the table. Incrementing a cell by one (with wraparound)
  // adds exactly one mod M to every constraint sum that reads it.
  std::vector<int> values(cells, 0);
  std::vector<int> sums(constraints.size(), 0);
  std::size_t met = 0;
  for (std::size_t c = 0; c < constraints.size(); ++c) met += required[c] == 0 ? 1 : 0;

  SearchResult result{total, 0, std::nullopt};
  while (true) {
    if (met == constraints.size()) {
      if (result.count == 0) result.witness = DeterministicModel(catalog, values);
      ++result.count;
    }
    std::size_t i = cells;
    while (i > 0) {
      --i;
      values[i] = values[i] + 1 == M ? 0 : values[i] + 1;
      for (const std::size_t c : touching[i]) {
        const bool was = sums[c] == required[c];
        sums[c] = sums[c] + 1 == M ? 0 : sums[c] + 1;
        const bool now = sums[c] == required[c];
        if (was != now) met = now ? met + 1 : met - 1;
      }
      if (values[i] != 0) break;
      if (i == 0) return result;
    }
  }
}

std::optional<ForcedValue> ghz_forced_value(std::span<const Constraint> constraints, const SettingsCatalog& catalog) {
  check_constraints(catalog, constraints);
  if (constraints.empty()) return std::nullopt;
  const int M = catalog.ports();

  std::vector<int> uses(catalog.cell_count(), 0);
  Residue product(0, M);
  for (const Constraint& c : constraints) {
    for (std::size_t l = 0; l < c.pattern.size(); ++l) {
      auto& n = uses[catalog.cell(static_cast<int>(l), c.pattern[l])];
      n = (n + 1) % M;
    }
    product += c.required;
  }

  std::vector<int> pattern(as_index(catalog.stations()), -1);
  for (int l = 0; l < catalog.stations(); ++l) {
    for (int s = 0; s < catalog.settings(l); ++s) {
      const int n = uses[catalog.cell(l, s)];
      if (n == 0) continue;
      if (n != 1 || pattern[as_index(l)] != -1) return std::nullopt;
      pattern[as_index(l)] = s;
    }
    if (pattern[as_index(l)] == -1) return std::nullopt;
  }
  return ForcedValue{std::move(pattern), product};
}

std::optional<AlgebraicConflict> find_algebraic_conflict(std::span<const Constraint> constraints,
                                                         const SettingsCatalog& catalog) {
  check_constraints(catalog, constraints);
  for (std::size_t i = 0; i < constraints.size(); ++i) {
    std::vector<Constraint> others;
    others.reserve(constraints.size() - 1);
    for (std::size_t j = 0; j < constraints.size(); ++j) {
      if (j != i) others.push_back(constraints[j]);
    }
    auto forced = ghz_forced_value(others, catalog);
    if (forced && forced->pattern == constraints[i].pattern && !(forced->value == constraints[i].required)) {
      return AlgebraicConflict{i, std::move(*forced)};
    }
  }
  return std::nullopt;
}

}  // namespace ghzmp
