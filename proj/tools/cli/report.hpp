#pragma once

#include <ostream>
#include <string>

#include "ghzmp/phase.hpp"
#include "json.hpp"

namespace ghzmp::cli {

inline constexpr std::string_view kToolName = "ghzmp";
inline constexpr std::string_view kToolVersion = "1.0.0";

enum class Format { text, records };

/// Destination for one command's results. Records are one JSON object per line.
class Output {
 public:
  Output(std::ostream& out, Format format, bool timings) : out_(out), format_(format), timings_(timings) {}

  bool text() const noexcept { return format_ == Format::text; }
  bool timings() const noexcept { return timings_; }
  std::ostream& stream() noexcept { return out_; }
  void record(const nlohmann::ordered_json& r) { out_ << r.dump() << '\n'; }
  /// Header record every machine-readable report starts with.
  void meta(std::string_view command, nlohmann::ordered_json inputs, nlohmann::ordered_json extra = {});

 private:
  std::ostream& out_;
  Format format_;
  bool timings_;
};

/// 12 significant digits; magnitudes below 1e-13 print as 0.
std::string format_real(double x);
std::string format_complex(const Complex& z);
/// "0.698131700798 (1/9 of 2π)" for exact angles, radians otherwise.
std::string format_angle(const PhaseAngle& a);
/// Bell number as γ_M^k.
std::string format_class(const Residue& r);

nlohmann::ordered_json complex_json(const Complex& z);
nlohmann::ordered_json residue_json(const Residue& r);

}  // namespace ghzmp::cli
