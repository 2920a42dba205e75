#include "report.hpp"

#include <cmath>
#include <cstdio>

namespace ghzmp::cli {

void Output::meta(std::string_view command, nlohmann::ordered_json inputs, nlohmann::ordered_json extra) {
  nlohmann::ordered_json r;
  r["record"] = "meta";
  r["tool"] = kToolName;
  r["version"] = kToolVersion;
  r["command"] = command;
  r["inputs"] = std::move(inputs);
  if (extra.is_object()) {
    for (auto& [key, value] : extra.items()) r[key] = value;
  }
  record(r);
}

std::string format_real(double x) {
  if (std::abs(x) < 1e-13) x = 0.0;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string format_complex(const Complex& z) {
  const std::string re = format_real(z.real());
  const std::string im = format_real(std::abs(z.imag()));
  if (im == "0") return re;
  const bool negative = z.imag() < 0.0;
  if (re == "0") return (negative ? "-" : "") + im + "i";
  return re + (negative ? " - " : " + ") + im + "i";
}

std::string format_angle(const PhaseAngle& a) {
  std::string out = format_real(a.radians());
  if (a.is_exact()) out += " (" + a.turns()->to_string() + " of 2π)";
  return out;
}

std::string format_class(const Residue& r) {
  return "γ_" + std::to_string(r.modulus()) + "^" + std::to_string(r.value());
}

nlohmann::ordered_json complex_json(const Complex& z) { return {{"re", z.real()}, {"im", z.imag()}}; }

nlohmann::ordered_json residue_json(const Residue& r) { return {{"k", r.value()}, {"modulus", r.modulus()}}; }

}  // namespace ghzmp::cli
