#pragma once

#include <span>
#include <vector>

#include "ghzmp/phase.hpp"

namespace ghzmp {

inline constexpr int kMaxPorts = 64;

/// Dense M x M transfer matrix of a 2M-port device, row-major by input port.
/// Port indices are 0-based.
class MultiportMatrix {
 public:
  /// Throws InvalidArgument unless entries.size() == ports * ports and ports >= 2.
  MultiportMatrix(int ports, std::vector<Complex> entries);

  int ports() const noexcept { return ports_; }
  const Complex& operator()(int input, int output) const { return entries_[index(input, output)]; }
  Complex& operator()(int input, int output) { return entries_[index(input, output)]; }
  std::span<const Complex> entries() const noexcept { return entries_; }

 private:
  std::size_t index(int input, int output) const {
    return static_cast<std::size_t>(input) * static_cast<std::size_t>(ports_) + static_cast<std::size_t>(output);
  }

  int ports_;
  std::vector<Complex> entries_;
};

/// Bell multiport: entry (m, m') = gamma_M^(m*m') / sqrt(M), 0-based.
/// Throws InvalidArgument for ports outside [2, kMaxPorts].
MultiportMatrix bell_multiport(int ports);

/// True iff U U^dagger == I and every |entry| == 1/sqrt(M), both within tol per entry.
bool verify_unitarity(const MultiportMatrix& u, double tol);

/// out[m'] = sum_m in[m] * U(m, m').
std::vector<Complex> transmit(const MultiportMatrix& u, std::span<const Complex> input);

}  // namespace ghzmp
