#include "ghzmp/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "ghzmp/errors.hpp"

namespace ghzmp {
namespace {

std::size_t as_index(int i) { return static_cast<std::size_t>(i); }

void require_enumerable(const ExperimentConfig& cfg, const char* what) {
  const std::uint64_t count = cfg.outcome_count();
  if (count > kMaxOutcomes) {
    throw ResourceLimit(std::string(what) + ": outcome table of " + std::to_string(cfg.ports) + "^" +
                            std::to_string(cfg.particles) + " entries exceeds the limit of " +
                            std::to_string(kMaxOutcomes),
                        count, kMaxOutcomes);
  }
}

void check_outcome(const ExperimentConfig& cfg, const OutcomeTuple& outcome) {
  if (outcome.detectors.size() != as_index(cfg.particles)) {
    throw InvalidArgument("outcome has " + std::to_string(outcome.detectors.size()) + " detectors, expected " +
                          std::to_string(cfg.particles));
  }
  for (const int k : outcome.detectors) {
    if (k < 0 || k >= cfg.ports) {
      throw InvalidArgument("detector index " + std::to_string(k) + " outside [0, " + std::to_string(cfg.ports) + ")");
    }
  }
}

// Total phase picked up by the m-th GHZ component: sum over stations of phi_l^m.
double component_phase(const PhaseSettings& settings, int port) {
  double sum = 0.0;
  for (int l = 0; l < settings.stations(); ++l) sum += settings.at(l, port).radians();
  return sum;
}

int detector_sum_at(std::size_t index, const ExperimentConfig& cfg) {
  const auto M = static_cast<std::size_t>(cfg.ports);
  std::size_t sum = 0;
  for (int l = 0; l < cfg.particles; ++l) {
    sum += index % M;
    index /= M;
  }
  return static_cast<int>(sum % M);
}

}  // namespace

void ExperimentConfig::validate() const {
  if (particles < 1) throw InvalidArgument("particle count must be >= 1, got " + std::to_string(particles));
  if (ports < 2) throw InvalidArgument("port count must be >= 2, got " + std::to_string(ports));
}

std::uint64_t ExperimentConfig::outcome_count() const noexcept {
  std::uint64_t count = 1;
  for (int l = 0; l < particles; ++l) {
    if (__builtin_mul_overflow(count, static_cast<std::uint64_t>(ports), &count)) {
      return std::numeric_limits<std::uint64_t>::max();
    }
  }
  return count;
}

PhaseSettings::PhaseSettings(std::vector<std::vector<PhaseAngle>> rows) : rows_(std::move(rows)) {
  if (rows_.empty()) throw InvalidArgument("phase settings need at least one station");
  for (std::size_t l = 0; l < rows_.size(); ++l) {
    if (rows_[l].size() != rows_.front().size()) {
      throw InvalidArgument("station " + std::to_string(l + 1) + " has " + std::to_string(rows_[l].size()) +
                            " phases, station 1 has " + std::to_string(rows_.front().size()));
    }
  }
}

PhaseSettings PhaseSettings::zeros(const ExperimentConfig& cfg) {
  cfg.validate();
  return PhaseSettings(std::vector<std::vector<PhaseAngle>>(as_index(cfg.particles),
                                                            std::vector<PhaseAngle>(as_index(cfg.ports))));
}

bool PhaseSettings::all_exact() const noexcept {
  return std::all_of(rows_.begin(), rows_.end(), [](const auto& row) {
    return std::all_of(row.begin(), row.end(), [](const PhaseAngle& a) { return a.is_exact(); });
  });
}

void check_shape(const ExperimentConfig& cfg, const PhaseSettings& settings) {
  cfg.validate();
  if (settings.stations() != cfg.particles || settings.ports() != cfg.ports) {
    throw InvalidArgument("phase settings are " + std::to_string(settings.stations()) + "x" +
                          std::to_string(settings.ports()) + ", experiment needs " + std::to_string(cfg.particles) +
                          "x" + std::to_string(cfg.ports));
  }
}

Complex joint_amplitude(const ExperimentConfig& cfg, const PhaseSettings& settings, const OutcomeTuple& outcome) {
  check_shape(cfg, settings);
  check_outcome(cfg, outcome);
  const int M = cfg.ports;
  Complex sum{};
  for (int m = 0; m < M; ++m) {
    // prod_n gamma_M^(m * k_n), accumulated as an exact exponent mod M.
    Residue bell(0, M);
    for (const int k : outcome.detectors) bell += Residue(static_cast<std::int64_t>(m) * k, M);
    sum += std::polar(1.0, component_phase(settings, m)) * residue_to_complex(bell);
  }
  const double prefactor = std::pow(1.0 / std::sqrt(static_cast<double>(M)), cfg.particles + 1);
  return prefactor * sum;
}

ProbabilityPaths joint_probability_paths(const ExperimentConfig& cfg, const PhaseSettings& settings,
                                         const OutcomeTuple& outcome) {
  const double amplitude_squared = std::norm(joint_amplitude(cfg, settings, outcome));

  const int M = cfg.ports;
  const double step = kTwoPi / static_cast<double>(M);
  double cosines = 0.0;
  for (int m = 1; m < M; ++m) {
    for (int mp = 0; mp < m; ++mp) {
      double delta = 0.0;
      for (int l = 0; l < cfg.particles; ++l) {
        const int k = outcome.detectors[as_index(l)];
        const Residue shift(static_cast<std::int64_t>(k) * (m - mp), M);
        delta += settings.at(l, m).radians() - settings.at(l, mp).radians() + step * static_cast<double>(shift.value());
      }
      cosines += std::cos(delta);
    }
  }
  const double cosine_expansion =
      std::pow(1.0 / static_cast<double>(M), cfg.particles + 1) * (static_cast<double>(M) + 2.0 * cosines);
  return {amplitude_squared, cosine_expansion};
}

double joint_probability(const ExperimentConfig& cfg, const PhaseSettings& settings, const OutcomeTuple& outcome,
                         const Tolerances& tol) {
  const ProbabilityPaths paths = joint_probability_paths(cfg, settings, outcome);
  if (std::abs(paths.amplitude_squared - paths.cosine_expansion) >= tol.probability) {
    throw IntegrityError("joint probability paths disagree: |amplitude|^2 = " +
                         std::to_string(paths.amplitude_squared) +
                         ", cosine expansion = " + std::to_string(paths.cosine_expansion));
  }
  return paths.amplitude_squared;
}

OutcomeDistribution::OutcomeDistribution(ExperimentConfig cfg, std::vector<double> probabilities)
    : cfg_(cfg), probabilities_(std::move(probabilities)) {
  cfg_.validate();
  if (probabilities_.size() != cfg_.outcome_count()) {
    throw InvalidArgument("distribution size does not match M^N");
  }
}

OutcomeTuple OutcomeDistribution::outcome(std::size_t index) const {
  OutcomeTuple out{std::vector<int>(as_index(cfg_.particles))};
  const auto M = static_cast<std::size_t>(cfg_.ports);
  for (int l = cfg_.particles - 1; l >= 0; --l) {
    out.detectors[as_index(l)] = static_cast<int>(index % M);
    index /= M;
  }
  return out;
}

std::size_t OutcomeDistribution::index_of(const OutcomeTuple& outcome) const {
  check_outcome(cfg_, outcome);
  std::size_t index = 0;
  for (const int k : outcome.detectors) index = index * static_cast<std::size_t>(cfg_.ports) + static_cast<std::size_t>(k);
  return index;
}

int OutcomeDistribution::detector_sum(std::size_t index) const { return detector_sum_at(index, cfg_); }

std::vector<double> OutcomeDistribution::marginal(int station) const {
  if (station < 0 || station >= cfg_.particles) throw InvalidArgument("station index out of range");
  const auto M = static_cast<std::size_t>(cfg_.ports);
  std::size_t stride = 1;
  for (int l = cfg_.particles - 1; l > station; --l) stride *= M;
  std::vector<double> out(M);
  for (std::size_t i = 0; i < probabilities_.size(); ++i) out[(i / stride) % M] += probabilities_[i];
  return out;
}

double OutcomeDistribution::total() const {
  double sum = 0.0;
  for (const double p : probabilities_) sum += p;
  return sum;
}

OutcomeDistribution full_distribution(const ExperimentConfig& cfg, const PhaseSettings& settings,
                                      const Tolerances& tol) {
  check_shape(cfg, settings);
  require_enumerable(cfg, "full_distribution");
  // The probability depends on the outcome only through sum(k_l) mod M, so
  // one representative per class is evaluated (with its cross-check).
  std::vector<double> by_class(as_index(cfg.ports));
  for (int s = 0; s < cfg.ports; ++s) {
    OutcomeTuple representative{std::vector<int>(as_index(cfg.particles), 0)};
    representative.detectors[0] = s;
    by_class[as_index(s)] = joint_probability(cfg, settings, representative, tol);
  }
  const auto count = static_cast<std::size_t>(cfg.outcome_count());
  std::vector<double> probabilities(count);
  for (std::size_t i = 0; i < count; ++i) probabilities[i] = by_class[as_index(detector_sum_at(i, cfg))];
  return OutcomeDistribution(cfg, std::move(probabilities));
}

CorrelationValue correlation_brute(const ExperimentConfig& cfg, const PhaseSettings& settings, const Tolerances& tol) {
  const OutcomeDistribution table = full_distribution(cfg, settings, tol);
  std::vector<Complex> bell(as_index(cfg.ports));
  for (int s = 0; s < cfg.ports; ++s) bell[as_index(s)] = residue_to_complex(Residue(s, cfg.ports));
  Complex sum{};
  for (std::size_t i = 0; i < table.size(); ++i) sum += bell[as_index(table.detector_sum(i))] * table[i];
  return {sum, std::nullopt};
}

std::vector<PhaseAngle> correlation_exponents(const ExperimentConfig& cfg, const PhaseSettings& settings) {
  check_shape(cfg, settings);
  const int M = cfg.ports;
  std::vector<PhaseAngle> exponents;
  exponents.reserve(as_index(M));
  for (int m = 0; m < M; ++m) {
    const int next = (m + 1) % M;
    PhaseAngle sum;
    if (settings.all_exact()) {
      for (int l = 0; l < cfg.particles; ++l) sum = sum + (settings.at(l, m) - settings.at(l, next));
    } else {
      double radians = 0.0;
      for (int l = 0; l < cfg.particles; ++l) radians += settings.at(l, m).radians() - settings.at(l, next).radians();
      sum = PhaseAngle::from_radians(radians);
    }
    exponents.push_back(sum);
  }
  return exponents;
}

namespace {

std::optional<Residue> common_class(const std::vector<PhaseAngle>& exponents, int ports, double tol) {
  std::optional<Residue> shared;
  for (const PhaseAngle& e : exponents) {
    const auto k = phase_as_residue(e, ports, tol);
    if (!k || (shared && !(*shared == *k))) return std::nullopt;
    shared = k;
  }
  return shared;
}

}  // namespace

CorrelationValue correlation_closed(const ExperimentConfig& cfg, const PhaseSettings& settings) {
  const std::vector<PhaseAngle> exponents = correlation_exponents(cfg, settings);
  Complex sum{};
  for (const PhaseAngle& e : exponents) sum += std::polar(1.0, e.radians());
  CorrelationValue out{sum / static_cast<double>(cfg.ports), std::nullopt};
  if (settings.all_exact()) out.exact_class = common_class(exponents, cfg.ports, 0.0);
  return out;
}

std::optional<Residue> perfect_correlation_class(const ExperimentConfig& cfg, const PhaseSettings& settings,
                                                 const Tolerances& tol) {
  return common_class(correlation_exponents(cfg, settings), cfg.ports, tol.unit);
}

Residue predict_last(const Residue& k_class, std::span<const Residue> observed) {
  Residue sum(0, k_class.modulus());
  for (const Residue& r : observed) sum += r;
  return k_class - sum;
}

SampleResult sample_outcomes(const ExperimentConfig& cfg, const PhaseSettings& settings, std::uint64_t shots,
                             std::uint64_t seed, const Tolerances& tol) {
  if (shots == 0) throw InvalidArgument("sample_outcomes: shots must be positive");
  const OutcomeDistribution table = full_distribution(cfg, settings, tol);

  std::vector<double> cdf(table.size());
  double running = 0.0;
  std::size_t last_supported = 0;
  for (std::size_t i = 0; i < table.size(); ++i) {
    running += table[i];
    cdf[i] = running;
    if (table[i] > 0.0) last_supported = i;
  }

  std::mt19937_64 engine(seed);
  SampleResult result{kSamplerGenerator, seed, shots, std::vector<std::uint64_t>(table.size()), {}};
  for (std::uint64_t shot = 0; shot < shots; ++shot) {
    // 53-bit uniform in [0, 1); portable, unlike std::uniform_real_distribution.
    const double u = static_cast<double>(engine() >> 11) * 0x1.0p-53;
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u * running);
    const std::size_t index = it == cdf.end() ? last_supported : static_cast<std::size_t>(it - cdf.begin());
    ++result.counts[index];
  }

  std::vector<std::uint64_t> per_class(as_index(cfg.ports));
  for (std::size_t i = 0; i < table.size(); ++i) per_class[as_index(table.detector_sum(i))] += result.counts[i];
  Complex sum{};
  for (int s = 0; s < cfg.ports; ++s) {
    sum += residue_to_complex(Residue(s, cfg.ports)) * static_cast<double>(per_class[as_index(s)]);
  }
  result.estimate = {sum / static_cast<double>(shots), std::nullopt};
  return result;
}

}  // namespace ghzmp
