#include "ghzmp/phase.hpp"

#include <charconv>
#include <cmath>
#include <numeric>
#include <system_error>

#include "ghzmp/errors.hpp"

namespace ghzmp {
namespace {

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t out;
  if (__builtin_mul_overflow(a, b, &out)) throw RationalOverflow("rational multiplication overflows 64 bits");
  return out;
}

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t out;
  if (__builtin_add_overflow(a, b, &out)) throw RationalOverflow("rational addition overflows 64 bits");
  return out;
}

std::int64_t checked_neg(std::int64_t a) {
  std::int64_t out;
  if (__builtin_sub_overflow(std::int64_t{0}, a, &out)) throw RationalOverflow("rational negation overflows 64 bits");
  return out;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::int64_t parse_int(std::string_view text, std::string_view whole) {
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  std::int64_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec == std::errc::result_out_of_range) {
    throw RationalOverflow("phase \"" + std::string(whole) + "\" does not fit in 64-bit rationals");
  }
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw InvalidArgument("malformed phase \"" + std::string(whole) + "\"; expected \"p/q\" or radians");
  }
  return value;
}

}  // namespace

Rational::Rational(std::int64_t numerator, std::int64_t denominator) {
  if (denominator == 0) throw InvalidArgument("rational with zero denominator");
  if (denominator < 0) {
    numerator = checked_neg(numerator);
    denominator = checked_neg(denominator);
  }
  const std::int64_t g = std::gcd(numerator, denominator);
  num_ = numerator / g;
  den_ = denominator / g;
}

Rational Rational::fractional_part() const {
  std::int64_t r = num_ % den_;
  if (r < 0) r += den_;
  return Rational(r, den_);
}

Rational Rational::operator-() const { return Rational(checked_neg(num_), den_); }

Rational operator+(const Rational& a, const Rational& b) {
  const std::int64_t g = std::gcd(a.den_, b.den_);
  const std::int64_t lhs_scale = b.den_ / g;
  const std::int64_t rhs_scale = a.den_ / g;
  const std::int64_t den = checked_mul(a.den_, lhs_scale);
  const std::int64_t num = checked_add(checked_mul(a.num_, lhs_scale), checked_mul(b.num_, rhs_scale));
  return Rational(num, den);
}

Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }

Rational operator*(const Rational& a, const Rational& b) {
  // Cross-reduce first so intermediate products stay small.
  const std::int64_t g1 = std::gcd(a.num_, b.den_);
  const std::int64_t g2 = std::gcd(b.num_, a.den_);
  return Rational(checked_mul(a.num_ / g1, b.num_ / g2), checked_mul(a.den_ / g2, b.den_ / g1));
}

std::string Rational::to_string() const {
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Residue::Residue(std::int64_t value, std::int64_t modulus) : value_(0), modulus_(modulus) {
  if (modulus < 2) throw InvalidArgument("residue modulus must be >= 2, got " + std::to_string(modulus));
  value_ = value % modulus;
  if (value_ < 0) value_ += modulus;
}

Residue Residue::operator-() const { return Residue(modulus_ - value_, modulus_); }

Residue& Residue::operator+=(const Residue& other) {
  if (other.modulus_ != modulus_) {
    throw InvalidArgument("residue moduli differ: " + std::to_string(modulus_) + " vs " +
                          std::to_string(other.modulus_));
  }
  value_ = (value_ + other.value_) % modulus_;
  return *this;
}

Complex residue_to_complex(const Residue& r) {
  const std::int64_t v = r.value();
  const std::int64_t m = r.modulus();
  if ((4 * v) % m == 0) {
    switch ((4 * v) / m) {
      case 0: return {1.0, 0.0};
      case 1: return {0.0, 1.0};
      case 2: return {-1.0, 0.0};
      case 3: return {0.0, -1.0};
      default: break;
    }
  }
  return std::polar(1.0, kTwoPi * static_cast<double>(v) / static_cast<double>(m));
}

double normalize_radians(double radians) noexcept {
  double r = std::fmod(radians, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

PhaseAngle::PhaseAngle(const Rational& turns)
    : turns_(turns.fractional_part()), radians_(normalize_radians(kTwoPi * turns_->to_double())) {}

PhaseAngle PhaseAngle::from_radians(double radians) {
  if (!std::isfinite(radians)) throw InvalidArgument("phase angle must be finite");
  return PhaseAngle(std::nullopt, normalize_radians(radians));
}

PhaseAngle PhaseAngle::operator-() const {
  if (turns_) return PhaseAngle(-*turns_);
  return from_radians(-radians_);
}

PhaseAngle operator+(const PhaseAngle& a, const PhaseAngle& b) {
  if (a.turns_ && b.turns_) return PhaseAngle(*a.turns_ + *b.turns_);
  return PhaseAngle::from_radians(a.radians_ + b.radians_);
}

std::string PhaseAngle::to_string() const {
  if (turns_) return turns_->to_string();
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, radians_);
  return std::string(buf, res.ptr);
}

std::optional<Residue> phase_as_residue(const PhaseAngle& a, std::int64_t modulus, double tol) {
  if (modulus < 2) throw InvalidArgument("modulus must be >= 2");
  if (const auto& t = a.turns()) {
    const Rational scaled = *t * Rational(modulus);
    if (!scaled.is_integer()) return std::nullopt;
    return Residue(scaled.num(), modulus);
  }
  const double step = kTwoPi / static_cast<double>(modulus);
  const double k = std::round(a.radians() / step);
  if (std::abs(a.radians() - k * step) >= tol) return std::nullopt;
  return Residue(static_cast<std::int64_t>(k), modulus);
}

ParsedPhase parse_phase(std::string_view text) {
  const std::string_view s = trim(text);
  if (s.empty()) throw InvalidArgument("empty phase");
  if (const auto slash = s.find('/'); slash != std::string_view::npos) {
    const std::int64_t p = parse_int(trim(s.substr(0, slash)), s);
    const std::int64_t q = parse_int(trim(s.substr(slash + 1)), s);
    if (q <= 0) throw InvalidArgument("phase \"" + std::string(s) + "\" needs a positive denominator");
    const Rational raw(p, q);
    const PhaseAngle angle = PhaseAngle::from_turns(raw);
    const bool normalized = raw.num() != p || raw.den() != q || !(raw == *angle.turns());
    return {angle, normalized};
  }
  const std::string_view digits = s.front() == '+' ? s.substr(1) : s;
  double radians = 0.0;
  const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), radians);
  if (ec != std::errc{} || ptr != digits.data() + digits.size() || digits.empty()) {
    throw InvalidArgument("malformed phase \"" + std::string(s) + "\"; expected \"p/q\" or radians");
  }
  if (radians == 0.0) return {PhaseAngle{}, false};
  return {PhaseAngle::from_radians(radians), false};
}

}  // namespace ghzmp
