#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace ghzmp {

using Complex = std::complex<double>;

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

/// Comparison tolerances for floating paths. Exact paths never use these.
struct Tolerances {
  double unit = 1e-9;          // unit-modulus quantities (phases, Bell numbers)
  double probability = 1e-10;  // probabilities and correlation cross-checks
};

/// Reduced fraction with 64-bit parts and overflow-checked arithmetic.
/// The denominator is always positive.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t numerator, std::int64_t denominator);
  explicit Rational(std::int64_t integer) : Rational(integer, 1) {}

  std::int64_t num() const noexcept { return num_; }
  std::int64_t den() const noexcept { return den_; }
  bool is_integer() const noexcept { return den_ == 1; }

  /// Canonical representative of this value mod 1, in [0, 1).
  Rational fractional_part() const;
  double to_double() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }

  Rational operator-() const;
  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend bool operator==(const Rational&, const Rational&) = default;

  std::string to_string() const;

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

/// Element of Z/MZ. Stands for the Bell number exp(2*pi*i*value/modulus).
class Residue {
 public:
  /// Reduces any integer into [0, modulus). Throws InvalidArgument for modulus < 2.
  Residue(std::int64_t value, std::int64_t modulus);

  std::int64_t value() const noexcept { return value_; }
  std::int64_t modulus() const noexcept { return modulus_; }

  Residue operator-() const;
  Residue& operator+=(const Residue& other);
  friend Residue operator+(Residue a, const Residue& b) { return a += b; }
  friend Residue operator-(const Residue& a, const Residue& b) { return a + (-b); }
  friend bool operator==(const Residue&, const Residue&) = default;

 private:
  std::int64_t value_;
  std::int64_t modulus_;
};

/// exp(2*pi*i*r.value/r.modulus). Quarter turns are returned exactly.
Complex residue_to_complex(const Residue& r);

/// Angle held as a fraction of a full turn when known exactly, and always as
/// radians normalized into [0, 2*pi).
class PhaseAngle {
 public:
  PhaseAngle() : PhaseAngle(Rational{}) {}

  /// 2*pi * turns, reduced mod 1.
  static PhaseAngle from_turns(const Rational& turns) { return PhaseAngle(turns); }
  static PhaseAngle from_turns(std::int64_t p, std::int64_t q) { return PhaseAngle(Rational(p, q)); }
  /// Approximate-only angle. Throws InvalidArgument on non-finite input.
  static PhaseAngle from_radians(double radians);

  bool is_exact() const noexcept { return turns_.has_value(); }
  const std::optional<Rational>& turns() const noexcept { return turns_; }
  double radians() const noexcept { return radians_; }

  PhaseAngle operator-() const;
  friend PhaseAngle operator+(const PhaseAngle& a, const PhaseAngle& b);
  friend PhaseAngle operator-(const PhaseAngle& a, const PhaseAngle& b) { return a + (-b); }
  friend bool operator==(const PhaseAngle&, const PhaseAngle&) = default;

  /// Text form used by scenario files: "p/q" (of 2*pi) or radians.
  std::string to_string() const;

 private:
  explicit PhaseAngle(const Rational& turns);
  PhaseAngle(std::optional<Rational> turns, double radians) : turns_(turns), radians_(radians) {}

  std::optional<Rational> turns_;
  double radians_;
};

inline PhaseAngle phase_add(const PhaseAngle& a, const PhaseAngle& b) { return a + b; }

/// Residue k with a == 2*pi*k/modulus, exactly on the rational path or within
/// `tol` radians on the floating path.
std::optional<Residue> phase_as_residue(const PhaseAngle& a, std::int64_t modulus, double tol = Tolerances{}.unit);

struct ParsedPhase {
  PhaseAngle angle;
  bool normalized = false;  // rational input was unreduced or outside [0, 1)
};

/// Parses "p/q" (meaning 2*pi*p/q) or a decimal number of radians. A radians
/// value of exactly zero is the exact angle 0/1.
/// Throws InvalidArgument on malformed text, RationalOverflow on overflow.
ParsedPhase parse_phase(std::string_view text);

/// Radians wrapped into [0, 2*pi).
double normalize_radians(double radians) noexcept;

}  // namespace ghzmp
