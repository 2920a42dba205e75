#include "ghzmp/multiport.hpp"

#include <cmath>
#include <string>

#include "ghzmp/errors.hpp"

namespace ghzmp {

MultiportMatrix::MultiportMatrix(int ports, std::vector<Complex> entries) : ports_(ports), entries_(std::move(entries)) {
  if (ports < 2) throw InvalidArgument("multiport needs at least 2 ports, got " + std::to_string(ports));
  if (entries_.size() != static_cast<std::size_t>(ports) * static_cast<std::size_t>(ports)) {
    throw InvalidArgument("multiport matrix with " + std::to_string(ports) + " ports needs " +
                          std::to_string(ports * ports) + " entries, got " + std::to_string(entries_.size()));
  }
}

MultiportMatrix bell_multiport(int ports) {
  if (ports < 2 || ports > kMaxPorts) {
    throw InvalidArgument("Bell multiport port count must lie in [2, " + std::to_string(kMaxPorts) + "], got " +
                          std::to_string(ports));
  }
  const double scale = 1.0 / std::sqrt(static_cast<double>(ports));
  std::vector<Complex> entries;
  entries.reserve(static_cast<std::size_t>(ports) * static_cast<std::size_t>(ports));
  for (int m = 0; m < ports; ++m) {
    for (int mp = 0; mp < ports; ++mp) {
      entries.push_back(scale * residue_to_complex(Residue(static_cast<std::int64_t>(m) * mp, ports)));
    }
  }
  return MultiportMatrix(ports, std::move(entries));
}

bool verify_unitarity(const MultiportMatrix& u, double tol) {
  const int n = u.ports();
  const double modulus = 1.0 / std::sqrt(static_cast<double>(n));
  for (const Complex& z : u.entries()) {
    if (std::abs(std::abs(z) - modulus) > tol) return false;
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      Complex acc{};
      for (int k = 0; k < n; ++k) acc += u(i, k) * std::conj(u(j, k));
      const Complex expected = i == j ? Complex{1.0, 0.0} : Complex{};
      if (std::abs(acc.real() - expected.real()) > tol || std::abs(acc.imag() - expected.imag()) > tol) return false;
    }
  }
  return true;
}

std::vector<Complex> transmit(const MultiportMatrix& u, std::span<const Complex> input) {
  const int n = u.ports();
  if (input.size() != static_cast<std::size_t>(n)) {
    throw InvalidArgument("transmit: expected " + std::to_string(n) + " input amplitudes, got " +
                          std::to_string(input.size()));
  }
  std::vector<Complex> out(static_cast<std::size_t>(n));
  for (int m = 0; m < n; ++m) {
    for (int mp = 0; mp < n; ++mp) out[static_cast<std::size_t>(mp)] += input[static_cast<std::size_t>(m)] * u(m, mp);
  }
  return out;
}

}  // namespace ghzmp
