#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "qpr/solvers.hpp"
#include "support.hpp"

using namespace qpr;
using qpr::testing::max_abs_diff;
using qpr::testing::random_quaternion;
using qpr::testing::random_unit;
using qpr::testing::random_vector;

namespace {

const Quaternion I = Quaternion::i();
const Quaternion J = Quaternion::j();
const Quaternion K = Quaternion::k();

}  // namespace

TEST(Quaternion, UnitProductTable) {
  EXPECT_EQ(I * J, K);
  EXPECT_EQ(J * K, I);
  EXPECT_EQ(K * I, J);
  EXPECT_EQ(J * I, -K);
  EXPECT_EQ(K * J, -I);
  EXPECT_EQ(I * K, -J);
  EXPECT_EQ(I * I, Quaternion{-1.0});
  EXPECT_EQ(J * J, Quaternion{-1.0});
  EXPECT_EQ(K * K, Quaternion{-1.0});
  EXPECT_EQ(I * J * K, Quaternion{-1.0});
}

TEST(Quaternion, HandExpandedProduct) {
  // (1 + i)(1 + j) = 1 + j + i + ij = 1 + i + j + k
  EXPECT_EQ((Quaternion{1, 1, 0, 0} * Quaternion{1, 0, 1, 0}), (Quaternion{1, 1, 1, 1}));
  // (1 + 2i + 3j + 4k)(5 + 6i + 7j + 8k), expanded by hand
  EXPECT_EQ((Quaternion{1, 2, 3, 4} * Quaternion{5, 6, 7, 8}), (Quaternion{-60, 12, 30, 24}));
}

TEST(Quaternion, ConjMulMatchesConjugateThenMultiply) {
  RngStream rng(1, 0);
  for (int t = 0; t < 1000; ++t) {
    const Quaternion p = random_quaternion(rng);
    const Quaternion q = random_quaternion(rng);
    EXPECT_LE(max_abs_diff(conj_mul(p, q), conj(p) * q), 1e-14);
  }
}

TEST(Quaternion, AlgebraProperties) {
  RngStream rng(2, 0);
  for (int t = 0; t < 2000; ++t) {
    const Quaternion p = random_quaternion(rng);
    const Quaternion q = random_quaternion(rng);
    const Quaternion r = random_quaternion(rng);
    const double scale = abs(p) * abs(q) * abs(r) + 1.0;
    EXPECT_LE(max_abs_diff((p * q) * r, p * (q * r)), 1e-13 * scale);
    EXPECT_LE(max_abs_diff(conj(p * q), conj(q) * conj(p)), 1e-13 * scale);
    EXPECT_NEAR(abs(p * q), abs(p) * abs(q), 1e-13 * scale);
    EXPECT_LE(max_abs_diff(p * conj(p), Quaternion{norm2(p)}), 1e-13 * scale);
  }
}

TEST(Quaternion, SignOfZeroIsOne) {
  EXPECT_EQ(sign(Quaternion{}), Quaternion{1.0});
  EXPECT_EQ(sign(Quaternion{0, 0, -2, 0}), -J);
}

TEST(Quaternion, StreamFormat) {
  std::ostringstream os;
  os << Quaternion{1, -2, 0.5, 3};
  EXPECT_FALSE(os.str().empty());
}

TEST(QVector, InnerProductConjugatesLeft) {
  const QVector u{I, Quaternion{1.0}};
  const QVector v{J, K};
  // conj(i) j + conj(1) k = -k + k = 0
  EXPECT_EQ(inner(u, v), Quaternion{});
  EXPECT_THROW(inner(u, QVector(3)), std::invalid_argument);
}

TEST(QVector, InnerIsConjugateSymmetricAndRightLinear) {
  RngStream rng(3, 0);
  for (int t = 0; t < 200; ++t) {
    const QVector u = random_vector(rng, 5);
    const QVector v = random_vector(rng, 5);
    const Quaternion w = random_quaternion(rng);
    EXPECT_LE(max_abs_diff(inner(u, v), conj(inner(v, u))), 1e-12);
    EXPECT_LE(max_abs_diff(inner(u, v * w), inner(u, v) * w), 1e-12);
  }
}

TEST(QVector, ArithmeticAndNorm) {
  QVector v{Quaternion{3.0}, Quaternion{0, 0, 4, 0}};
  EXPECT_DOUBLE_EQ(norm(v), 5.0);
  v.axpy(2.0, QVector{Quaternion{1.0}, Quaternion{}});
  EXPECT_EQ(v[0], Quaternion{5.0});
  EXPECT_EQ((v - v), QVector(2));
  EXPECT_TRUE(all_finite(v));
  v[1].d = std::nan("");
  EXPECT_FALSE(all_finite(v));
  EXPECT_EQ(unit_vector(3, 1)[1], Quaternion{1.0});
}

TEST(QMatrix, ConjTransposeAndProducts) {
  RngStream rng(4, 0);
  QMatrix a(3, 2);
  for (auto& q : a.entries()) q = random_quaternion(rng);
  const QVector x = random_vector(rng, 2);
  const QVector y = random_vector(rng, 3);
  // <y, A x> = <A^* y, x>
  const Quaternion lhs = inner(y, mat_vec(a, x));
  const Quaternion rhs = inner(mat_vec(conj_transpose(a), y), x);
  EXPECT_LE(max_abs_diff(lhs, rhs), 1e-12);
  const QMatrix g = conj_transpose(a) * a;
  EXPECT_LE(hermitian_defect(g), 1e-12);
  EXPECT_EQ(QMatrix::identity(2) * g, g);
}

TEST(QMatrix, RankOneAccumulationMatchesOuter) {
  RngStream rng(5, 0);
  const QVector alpha = random_vector(rng, 4);
  QMatrix upper(4, 4);
  add_rank_one_upper(upper, 0.5, alpha.span());
  mirror_upper(upper);
  const QMatrix full = outer(alpha, alpha);
  for (std::size_t r = 0; r < 4; ++r) {
    for (std::size_t c = 0; c < 4; ++c) EXPECT_LE(max_abs_diff(upper(r, c), 0.5 * full(r, c)), 1e-13);
  }
}

TEST(Distance, ZeroAtEveryRightPhase) {
  RngStream rng(6, 0);
  for (int t = 0; t < 200; ++t) {
    const QVector x = random_vector(rng, 6);
    const Quaternion w = random_unit(rng);
    EXPECT_LE(dist(x * w, x), 1e-12 * norm(x));
  }
}

TEST(Distance, MatchesBruteForceOverUnitFactors) {
  // dist(z, x) = min over unit w of ||z - x w||; sample w on a fine random cloud.
  RngStream rng(7, 0);
  for (int t = 0; t < 4; ++t) {
    const QVector x = random_vector(rng, 3);
    const QVector z = random_vector(rng, 3);
    double best = std::numeric_limits<double>::infinity();
    for (int s = 0; s < 250000; ++s) best = std::min(best, norm(z - x * random_unit(rng)));
    const double d = dist(z, x);
    EXPECT_LE(d, best + 1e-12);
    EXPECT_NEAR(d, best, 2e-3 * norm(x));
  }
}

TEST(Distance, PureSignDistance) {
  const QVector w{I, J};
  EXPECT_DOUBLE_EQ(dist_pure(w, w * -1.0), 0.0);
  EXPECT_DOUBLE_EQ(dist_pure(w, QVector(2)), std::sqrt(2.0));
}
