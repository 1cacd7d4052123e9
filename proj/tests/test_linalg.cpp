#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "qpr/linalg.hpp"
#include "qpr/solvers.hpp"
#include "support.hpp"

using namespace qpr;
using qpr::testing::from_spectrum;
using qpr::testing::random_orthonormal;

TEST(Hermitian, RejectsNonSquareAndNonHermitian) {
  EXPECT_THROW(HermitianQMatrix(QMatrix(2, 3)), std::invalid_argument);
  QMatrix m(2, 2);
  m(0, 1) = Quaternion{0, 1, 0, 0};
  EXPECT_THROW(HermitianQMatrix{m}, std::invalid_argument);
  m(1, 0) = Quaternion{0, -1, 0, 0};
  EXPECT_NO_THROW(HermitianQMatrix{m});
}

TEST(PowerIteration, DiagonalMatrix) {
  QMatrix m(3, 3);
  m(0, 0) = 1.0;
  m(1, 1) = 5.0;
  m(2, 2) = 2.0;
  const auto pair = power_leading(HermitianQMatrix(m));
  EXPECT_NEAR(pair.value, 5.0, 1e-12);
  EXPECT_NEAR(abs(pair.vector[1]), 1.0, 1e-12);
}

TEST(PowerIteration, RejectsZeroMatrixAndBadCounts) {
  EXPECT_THROW(power_leading(HermitianQMatrix(QMatrix(2, 2))), std::invalid_argument);
  EXPECT_THROW(power_leading(HermitianQMatrix(QMatrix::identity(2)), 0), std::invalid_argument);
}

TEST(PowerIteration, RayleighHistoryHasOneEntryPerIteration) {
  RngStream rng(1, 0);
  const auto u = random_orthonormal(rng, 4);
  const HermitianQMatrix s(from_spectrum(u, {3.0, 1.0, 0.5, 0.2}));
  std::vector<double> hist;
  power_leading(s, 30, &hist);
  ASSERT_EQ(hist.size(), 30u);
  for (std::size_t k = 1; k < hist.size(); ++k) EXPECT_GE(hist[k], hist[k - 1] - 1e-12);  // PSD: monotone
}

TEST(PowerIteration, AgreesWithComplexAdjointOracle) {
  RngStream rng(2, 0);
  for (const std::size_t d : {4u, 8u, 16u}) {
    const auto u = random_orthonormal(rng, d);
    std::vector<double> lambda(d);
    lambda[0] = 2.0;
    for (std::size_t k = 1; k < d; ++k) lambda[k] = 1.4 * rng.uniform();
    const HermitianQMatrix s(from_spectrum(u, lambda));
    const auto oracle = complex_adjoint_eig(s);
    ASSERT_EQ(oracle.size(), 2 * d);
    const auto pair = power_leading(s);
    EXPECT_NEAR(pair.value, oracle.back(), 1e-9 * oracle.back());
    EXPECT_NEAR(oracle.back(), 2.0, 1e-10);
    EXPECT_LE(dist(pair.vector, u[0]), 1e-6);
  }
}

TEST(ComplexAdjoint, SpectrumIsDoubledAndMatchesConstruction) {
  RngStream rng(3, 0);
  const auto u = random_orthonormal(rng, 5);
  const std::vector<double> lambda{-1.0, 0.5, 2.0, 3.5, 4.0};
  const auto eig = complex_adjoint_eig(HermitianQMatrix(from_spectrum(u, lambda)));
  for (std::size_t k = 0; k < lambda.size(); ++k) {
    EXPECT_NEAR(eig[2 * k], lambda[k], 1e-10);
    EXPECT_NEAR(eig[2 * k + 1], lambda[k], 1e-10);
  }
}

TEST(Jacobi, ReconstructsSymmetricMatrix) {
  RngStream rng(4, 0);
  const std::size_t n = 6;
  std::vector<double> a(n * n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = r; c < n; ++c) a[r * n + c] = a[c * n + r] = rng.normal();
  }
  const auto eig = jacobi_eigen(a, n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += eig.vectors[r * n + k] * eig.values[k] * eig.vectors[c * n + k];
      EXPECT_NEAR(s, a[r * n + c], 1e-12);
    }
  }
}

TEST(Sym4, ResidualAndOrdering) {
  RngStream rng(5, 0);
  for (int t = 0; t < 100; ++t) {
    Mat4 w{};
    for (int r = 0; r < 4; ++r) {
      for (int c = r; c < 4; ++c) w[r][c] = w[c][r] = rng.normal();
    }
    const auto sp = sym4_smallest(w);
    double len = 0.0;
    for (int r = 0; r < 4; ++r) {
      double wv = 0.0;
      for (int c = 0; c < 4; ++c) wv += w[r][c] * sp.vector[c];
      EXPECT_NEAR(wv, sp.value * sp.vector[r], 1e-10);
      len += sp.vector[r] * sp.vector[r];
    }
    EXPECT_NEAR(len, 1.0, 1e-12);
    // nothing smaller than the reported value: Rayleigh quotient of random vectors
    for (int s = 0; s < 20; ++s) {
      Vec4 v{rng.normal(), rng.normal(), rng.normal(), rng.normal()};
      double num = 0.0;
      double den = 0.0;
      for (int r = 0; r < 4; ++r) {
        den += v[r] * v[r];
        for (int c = 0; c < 4; ++c) num += v[r] * w[r][c] * v[c];
      }
      EXPECT_GE(num / den, sp.value - 1e-10);
    }
  }
}

TEST(Sym4, TieBreakingConvention) {
  Mat4 id{};
  for (int k = 0; k < 4; ++k) id[k][k] = 1.0;
  EXPECT_EQ(sym4_smallest(id).vector, (Vec4{1, 0, 0, 0}));

  Mat4 e1{};
  e1[0][0] = 1.0;
  EXPECT_EQ(sym4_smallest(e1).vector, (Vec4{0, 1, 0, 0}));

  Mat4 neg{};
  neg[2][2] = -3.0;
  const auto sp = sym4_smallest(neg);
  EXPECT_EQ(sp.value, -3.0);
  EXPECT_EQ(sp.vector, (Vec4{0, 0, 1, 0}));

  Mat4 bad{};
  bad[0][1] = 1.0;
  EXPECT_THROW(sym4_smallest(bad), std::invalid_argument);
}
