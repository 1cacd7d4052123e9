#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "qpr/qvector.hpp"

namespace qpr {

/// Dense row-major quaternion matrix.
class QMatrix {
 public:
  QMatrix() = default;
  QMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static QMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Quaternion& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Quaternion& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<Quaternion> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const Quaternion> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  const std::vector<Quaternion>& entries() const { return data_; }
  std::vector<Quaternion>& entries() { return data_; }

  friend bool operator==(const QMatrix&, const QMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Quaternion> data_;
};

QMatrix conj_transpose(const QMatrix& a);

/// A B; throws std::invalid_argument when a.cols() != b.rows().
QMatrix operator*(const QMatrix& a, const QMatrix& b);

/// A v; throws std::invalid_argument on mismatch.
QVector mat_vec(const QMatrix& a, const QVector& v);

/// u v^*, i.e. entries u_i conj(v_j).
QMatrix outer(const QVector& u, const QVector& v);

/// dst += s * src
void mat_scale_add(QMatrix& dst, double s, const QMatrix& src);

/// dst += w * alpha alpha^* for a square dst. Only the upper triangle is
/// accumulated; call mirror_upper() once all terms are in.
void add_rank_one_upper(QMatrix& dst, double w, std::span<const Quaternion> alpha);

/// Fill the strict lower triangle with conjugates of the upper triangle and
/// zero the imaginary parts of the diagonal, making dst exactly Hermitian.
void mirror_upper(QMatrix& dst);

/// Largest component-wise |A - A^*| entry.
double hermitian_defect(const QMatrix& a);

}  // namespace qpr
