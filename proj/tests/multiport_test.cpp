#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "ghzmp/errors.hpp"
#include "ghzmp/multiport.hpp"

namespace ghzmp {
namespace {

void expect_complex_near(Complex actual, Complex expected, double tol) {
  EXPECT_NEAR(actual.real(), expected.real(), tol);
  EXPECT_NEAR(actual.imag(), expected.imag(), tol);
}

TEST(BellMultiport, KnownEntries) {
  const auto u2 = bell_multiport(2);
  const double h = 1.0 / std::sqrt(2.0);
  expect_complex_near(u2(0, 0), {h, 0}, 1e-15);
  expect_complex_near(u2(0, 1), {h, 0}, 1e-15);
  expect_complex_near(u2(1, 0), {h, 0}, 1e-15);
  expect_complex_near(u2(1, 1), {-h, 0}, 1e-15);

  // Paper port (3,3): alpha^4 = alpha.
  const auto u3 = bell_multiport(3);
  expect_complex_near(u3(2, 2), residue_to_complex(Residue(1, 3)) / std::sqrt(3.0), 1e-15);

  // Paper port (2,4): i^3 / 2.
  expect_complex_near(bell_multiport(4)(1, 3), {0.0, -0.5}, 1e-15);
}

TEST(BellMultiport, RangeGuard) {
  EXPECT_THROW(bell_multiport(1), InvalidArgument);
  EXPECT_THROW(bell_multiport(kMaxPorts + 1), InvalidArgument);
  EXPECT_NO_THROW(bell_multiport(kMaxPorts));
}

TEST(VerifyUnitarity, BellMultiportsAreUnitary) {
  for (int m = 2; m <= 16; ++m) EXPECT_TRUE(verify_unitarity(bell_multiport(m), 1e-12)) << m;
  EXPECT_TRUE(verify_unitarity(bell_multiport(64), 1e-12));
}

TEST(VerifyUnitarity, RejectsPerturbation) {
  auto u = bell_multiport(3);
  u(0, 0) += 1e-6;
  EXPECT_FALSE(verify_unitarity(u, 1e-12));
}

TEST(VerifyUnitarity, RejectsUnitaryThatDoesNotSplitEvenly) {
  EXPECT_FALSE(verify_unitarity(MultiportMatrix(2, {1.0, 0.0, 0.0, 1.0}), 1e-12));
}

TEST(MultiportMatrix, ShapeChecked) {
  EXPECT_THROW(MultiportMatrix(2, {1.0, 0.0, 0.0}), InvalidArgument);
}

TEST(Transmit, Examples) {
  const double h = 1.0 / std::sqrt(2.0);
  const std::vector<Complex> feed{1.0, 0.0};
  const auto out = transmit(bell_multiport(2), feed);
  expect_complex_near(out[0], {h, 0}, 1e-15);
  expect_complex_near(out[1], {h, 0}, 1e-15);

  const double t = 1.0 / std::sqrt(3.0);
  const std::vector<Complex> uniform{t, t, t};
  const auto focused = transmit(bell_multiport(3), uniform);
  expect_complex_near(focused[0], {1, 0}, 1e-12);
  expect_complex_near(focused[1], {0, 0}, 1e-12);
  expect_complex_near(focused[2], {0, 0}, 1e-12);

  const std::vector<Complex> zeros(5);
  for (const Complex& z : transmit(bell_multiport(5), zeros)) EXPECT_EQ(z, Complex{});

  EXPECT_THROW(transmit(bell_multiport(3), feed), InvalidArgument);
}

TEST(Transmit, PreservesNorm) {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> gauss;
  for (int m = 2; m <= 16; ++m) {
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<Complex> in(static_cast<std::size_t>(m));
      double norm_in = 0.0;
      for (auto& z : in) {
        z = {gauss(rng), gauss(rng)};
        norm_in += std::norm(z);
      }
      double norm_out = 0.0;
      for (const auto& z : transmit(bell_multiport(m), in)) norm_out += std::norm(z);
      EXPECT_NEAR(norm_out, norm_in, 1e-12 * std::max(1.0, norm_in));
    }
  }
}

TEST(Transmit, EvenSplittingAndColumnOrthogonality) {
  for (int m = 2; m <= 16; ++m) {
    const auto u = bell_multiport(m);
    for (int port = 0; port < m; ++port) {
      std::vector<Complex> feed(static_cast<std::size_t>(m));
      feed[static_cast<std::size_t>(port)] = 1.0;
      for (const auto& z : transmit(u, feed)) EXPECT_NEAR(std::norm(z), 1.0 / m, 1e-12);
    }
    for (int a = 0; a < m; ++a) {
      for (int b = a + 1; b < m; ++b) {
        Complex dot{};
        for (int k = 0; k < m; ++k) dot += std::conj(u(k, a)) * u(k, b);
        EXPECT_LT(std::abs(dot), 1e-12);
      }
    }
  }
}

}  // namespace
}  // namespace ghzmp
