#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ghzmp/phase.hpp"
#include "ghzmp/quantum.hpp"

namespace ghzmp {

/// Largest number of deterministic models count_satisfying will enumerate.
inline constexpr std::uint64_t kMaxModels = 100'000'000;

/// Finite list of allowed local settings per station. A pattern picks one
/// setting index per station.
class SettingsCatalog {
 public:
  using Setting = std::vector<PhaseAngle>;

  /// Throws InvalidArgument if any station is empty or any row is not `ports` long.
  SettingsCatalog(int ports, std::vector<std::vector<Setting>> station_settings);
  /// Every station offered the same settings.
  static SettingsCatalog shared(int stations, int ports, std::vector<Setting> settings);

  int stations() const noexcept { return static_cast<int>(settings_.size()); }
  int ports() const noexcept { return ports_; }
  int settings(int station) const { return static_cast<int>(settings_.at(static_cast<std::size_t>(station)).size()); }
  const Setting& setting(int station, int index) const;

  /// One table cell per (station, setting).
  std::size_t cell_count() const noexcept { return offsets_.back(); }
  std::size_t cell(int station, int index) const;
  /// M^(cell count), saturating at UINT64_MAX.
  std::uint64_t model_count() const noexcept;

  /// Throws InvalidArgument on a wrong-length pattern or out-of-range index.
  void check_pattern(std::span<const int> pattern) const;
  /// The phase table an experiment with this pattern would use.
  PhaseSettings settings_for(std::span<const int> pattern) const;

  friend bool operator==(const SettingsCatalog&, const SettingsCatalog&) = default;

 private:
  int ports_;
  std::vector<std::vector<Setting>> settings_;
  std::vector<std::size_t> offsets_;
};

/// Perfect correlation every model must reproduce: the Bell-number product
/// over `pattern` has to equal gamma_M^required.
struct Constraint {
  std::vector<int> pattern;
  Residue required;
  friend bool operator==(const Constraint&, const Constraint&) = default;
};

/// Assignment (station, setting) -> detector residue for every catalog cell.
class DeterministicModel {
 public:
  /// All-zero model over the catalog.
  explicit DeterministicModel(const SettingsCatalog& catalog);
  /// cells follow SettingsCatalog::cell order; values are reduced mod M.
  DeterministicModel(const SettingsCatalog& catalog, std::vector<int> cells);

  int ports() const noexcept { return ports_; }
  int stations() const noexcept { return static_cast<int>(offsets_.size()) - 1; }
  int settings(int station) const;
  Residue value(int station, int setting) const;
  void set(int station, int setting, const Residue& value);
  std::span<const int> cells() const noexcept { return cells_; }

  friend bool operator==(const DeterministicModel&, const DeterministicModel&) = default;

 private:
  std::size_t cell(int station, int setting) const;

  int ports_;
  std::vector<std::size_t> offsets_;
  std::vector<int> cells_;
};

/// Sum of the model's residues along the pattern (the Bell-number product).
Residue model_value(const DeterministicModel& model, std::span<const int> pattern);

bool satisfies(const DeterministicModel& model, std::span<const Constraint> constraints);

struct SearchResult {
  std::uint64_t total_models = 0;
  std::uint64_t count = 0;
  std::optional<DeterministicModel> witness;  // lexicographically smallest
};

/// Exact count of models meeting every constraint, by full odometer
/// enumeration (last cell fastest). Throws ResourceLimit above `limit` models.
SearchResult count_satisfying(const SettingsCatalog& catalog, std::span<const Constraint> constraints,
                              std::uint64_t limit = kMaxModels);

struct ForcedValue {
  std::vector<int> pattern;
  Residue value;
};

/// Multiplies all constraints together. Cells used a multiple of M times drop
/// out because every Bell number to the M-th power is 1; if what remains is
/// exactly one cell per station, each used once mod M, the product of those
/// cells is forced to the sum of the required residues.
std::optional<ForcedValue> ghz_forced_value(std::span<const Constraint> constraints, const SettingsCatalog& catalog);

struct AlgebraicConflict {
  std::size_t constraint_index;
  ForcedValue forced;  // what the other constraints force on that pattern
};

/// First constraint whose pattern the remaining constraints force to a
/// different residue than it requires.
std::optional<AlgebraicConflict> find_algebraic_conflict(std::span<const Constraint> constraints,
                                                         const SettingsCatalog& catalog);

}  // namespace ghzmp
