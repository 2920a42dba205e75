#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ghzmp/phase.hpp"

namespace ghzmp {

/// Largest outcome table (M^N) any enumerating operation will build.
inline constexpr std::uint64_t kMaxOutcomes = 10'000'000;

/// N particles, each fed into its own M-port Bell multiport.
struct ExperimentConfig {
  int particles = 1;
  int ports = 2;

  /// Throws InvalidArgument unless particles >= 1 and ports >= 2.
  void validate() const;
  /// M^N, saturating at UINT64_MAX.
  std::uint64_t outcome_count() const noexcept;
  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// Phase-shifter settings: one row of M angles per station.
class PhaseSettings {
 public:
  /// Throws InvalidArgument if rows is empty or rows differ in length.
  explicit PhaseSettings(std::vector<std::vector<PhaseAngle>> rows);
  static PhaseSettings zeros(const ExperimentConfig& cfg);

  int stations() const noexcept { return static_cast<int>(rows_.size()); }
  int ports() const noexcept { return rows_.empty() ? 0 : static_cast<int>(rows_.front().size()); }
  const PhaseAngle& at(int station, int port) const { return rows_[static_cast<std::size_t>(station)][static_cast<std::size_t>(port)]; }
  std::span<const PhaseAngle> station(int station) const { return rows_[static_cast<std::size_t>(station)]; }
  const std::vector<std::vector<PhaseAngle>>& rows() const noexcept { return rows_; }
  bool all_exact() const noexcept;

  friend bool operator==(const PhaseSettings&, const PhaseSettings&) = default;

 private:
  std::vector<std::vector<PhaseAngle>> rows_;
};

/// One joint detection event; detectors[l] is the 0-based exit port that fired at station l.
struct OutcomeTuple {
  std::vector<int> detectors;
  friend bool operator==(const OutcomeTuple&, const OutcomeTuple&) = default;
};

struct CorrelationValue {
  Complex value;
  std::optional<Residue> exact_class;  // set only on the all-rational path
};

/// Throws InvalidArgument when settings do not match cfg.
void check_shape(const ExperimentConfig& cfg, const PhaseSettings& settings);

/// Probability amplitude of one outcome; its squared modulus is the joint probability.
Complex joint_amplitude(const ExperimentConfig& cfg, const PhaseSettings& settings, const OutcomeTuple& outcome);

struct ProbabilityPaths {
  double amplitude_squared;
  double cosine_expansion;
};

/// Both closed forms of the joint probability, without comparing them.
ProbabilityPaths joint_probability_paths(const ExperimentConfig& cfg, const PhaseSettings& settings,
                                         const OutcomeTuple& outcome);

/// Amplitude-squared probability. Throws IntegrityError if the cosine
/// expansion disagrees by tol.probability or more.
double joint_probability(const ExperimentConfig& cfg, const PhaseSettings& settings, const OutcomeTuple& outcome,
                         const Tolerances& tol = {});

/// Complete outcome table in lexicographic order (station 0 most significant).
class OutcomeDistribution {
 public:
  OutcomeDistribution(ExperimentConfig cfg, std::vector<double> probabilities);

  const ExperimentConfig& config() const noexcept { return cfg_; }
  std::size_t size() const noexcept { return probabilities_.size(); }
  std::span<const double> probabilities() const noexcept { return probabilities_; }
  double operator[](std::size_t index) const { return probabilities_[index]; }
  double probability(const OutcomeTuple& outcome) const { return probabilities_[index_of(outcome)]; }

  OutcomeTuple outcome(std::size_t index) const;
  std::size_t index_of(const OutcomeTuple& outcome) const;
  /// Sum of all detectors mod M for the outcome at `index`.
  int detector_sum(std::size_t index) const;
  /// Distribution of station `station`'s detector, summed over everyone else.
  std::vector<double> marginal(int station) const;
  double total() const;

 private:
  ExperimentConfig cfg_;
  std::vector<double> probabilities_;
};

/// Throws ResourceLimit when M^N exceeds kMaxOutcomes.
OutcomeDistribution full_distribution(const ExperimentConfig& cfg, const PhaseSettings& settings,
                                      const Tolerances& tol = {});

/// Correlation function by its definition: sum over all outcomes of the
/// product of Bell numbers times the probability. Floating only.
CorrelationValue correlation_brute(const ExperimentConfig& cfg, const PhaseSettings& settings,
                                   const Tolerances& tol = {});

/// The M exponents sum_l (phi_l^m - phi_l^(m+1)), port index taken cyclically.
/// Exact when every input angle is exact.
std::vector<PhaseAngle> correlation_exponents(const ExperimentConfig& cfg, const PhaseSettings& settings);

/// Closed-form correlation, O(N*M). Attaches the Bell-number class when all
/// inputs are rational and every exponent is the same multiple of 2*pi/M.
CorrelationValue correlation_closed(const ExperimentConfig& cfg, const PhaseSettings& settings);

/// k when E == gamma_M^k (a perfect correlation), otherwise nothing. Uses the
/// exact path when all inputs are rational and tol.unit otherwise.
std::optional<Residue> perfect_correlation_class(const ExperimentConfig& cfg, const PhaseSettings& settings,
                                                 const Tolerances& tol = {});

/// The detector r at the remaining station with r + sum(observed) == k_class (mod M).
Residue predict_last(const Residue& k_class, std::span<const Residue> observed);

struct SampleResult {
  std::string generator;
  std::uint64_t seed = 0;
  std::uint64_t shots = 0;
  std::vector<std::uint64_t> counts;  // lexicographic outcome order
  CorrelationValue estimate;
};

/// Name of the generator recorded in sample metadata.
inline constexpr const char* kSamplerGenerator = "mt19937_64";

/// Draws `shots` outcomes from the exact table by inverse CDF. Deterministic in seed.
SampleResult sample_outcomes(const ExperimentConfig& cfg, const PhaseSettings& settings, std::uint64_t shots,
                             std::uint64_t seed, const Tolerances& tol = {});

}  // namespace ghzmp
