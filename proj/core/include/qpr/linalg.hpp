#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "qpr/qmatrix.hpp"

namespace qpr {

/// Square quaternion matrix with A^* = A, checked on construction.
class HermitianQMatrix {
 public:
  /// Throws std::invalid_argument unless m is square and Hermitian within
  /// `tol` (absolute, scaled by the largest entry modulus).
  explicit HermitianQMatrix(QMatrix m, double tol = 1e-10);

  std::size_t dim() const { return m_.rows(); }
  const QMatrix& matrix() const { return m_; }

  QVector apply(const QVector& v) const { return mat_vec(m_, v); }

 private:
  QMatrix m_;
};

struct EigenPair {
  double value = 0.0;
  QVector vector;
};

inline constexpr int kDefaultPowerIterations = 100;

/// Leading standard eigenpair by plain power iteration from (1,...,1)/sqrt(d).
/// Exactly `iters` products, no shifts or early exit. The value is the
/// Rayleigh quotient Re<v, S v> of the final iterate. If `rayleigh_history`
/// is non-null it receives the quotient after every iteration.
/// Throws std::invalid_argument if iters < 1 or an iterate is annihilated
/// (zero matrix).
EigenPair power_leading(const HermitianQMatrix& s, int iters = kDefaultPowerIterations,
                        std::vector<double>* rayleigh_history = nullptr);

/// Spectrum of the complex adjoint [[A1, A2], [-conj(A2), conj(A1)]] where
/// A = A1 + A2 j. Each standard eigenvalue of A appears twice. Sorted
/// ascending. Dense Jacobi; meant for oracle use (dim <= 64).
std::vector<double> complex_adjoint_eig(const HermitianQMatrix& s);

/// Eigen-decomposition of a dense real symmetric n x n matrix (row-major) by
/// cyclic Jacobi rotations. Returns eigenvalues (unsorted, in Jacobi order)
/// and the eigenvectors as columns of a row-major n x n matrix.
struct SymmetricEigen {
  std::vector<double> values;
  std::vector<double> vectors;
};
SymmetricEigen jacobi_eigen(std::vector<double> a, std::size_t n);

using Mat4 = std::array<std::array<double, 4>, 4>;
using Vec4 = std::array<double, 4>;

struct SmallestPair {
  double value = 0.0;
  Vec4 vector{};
};

/// Smallest eigenpair of a 4x4 real symmetric matrix. Among tied eigenvalues
/// the lowest Jacobi index wins; the vector is unit norm with its first
/// nonzero component positive. Throws std::invalid_argument if w is not
/// symmetric within 1e-10.
SmallestPair sym4_smallest(const Mat4& w);

}  // namespace qpr
