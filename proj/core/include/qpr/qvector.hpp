#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "qpr/quaternion.hpp"

namespace qpr {

/// Dense quaternion column vector.
class QVector {
 public:
  QVector() = default;
  explicit QVector(std::size_t n) : data_(n) {}
  QVector(std::size_t n, const Quaternion& fill) : data_(n, fill) {}
  QVector(std::initializer_list<Quaternion> init) : data_(init) {}
  explicit QVector(std::vector<Quaternion> entries) : data_(std::move(entries)) {}

  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  Quaternion& operator[](std::size_t i) { return data_[i]; }
  const Quaternion& operator[](std::size_t i) const { return data_[i]; }

  Quaternion* data() { return data_.data(); }
  const Quaternion* data() const { return data_.data(); }
  std::span<Quaternion> span() { return data_; }
  std::span<const Quaternion> span() const { return data_; }

  auto begin() { return data_.begin(); }
  auto end() { return data_.end(); }
  auto begin() const { return data_.begin(); }
  auto end() const { return data_.end(); }

  QVector& operator+=(const QVector& v);
  QVector& operator-=(const QVector& v);
  QVector& operator*=(double s);

  /// this += s * v
  void axpy(double s, const QVector& v);

  void set_zero();

  friend bool operator==(const QVector&, const QVector&) = default;

 private:
  std::vector<Quaternion> data_;
};

QVector operator+(QVector u, const QVector& v);
QVector operator-(QVector u, const QVector& v);
QVector operator*(QVector v, double s);
QVector operator*(double s, QVector v);

/// Right multiplication by a quaternion scalar: (v w)_k = v_k w.
QVector operator*(const QVector& v, const Quaternion& w);

/// sum_k conj(u_k) v_k. Throws std::invalid_argument on length mismatch.
Quaternion inner(std::span<const Quaternion> u, std::span<const Quaternion> v);
inline Quaternion inner(const QVector& u, const QVector& v) { return inner(u.span(), v.span()); }

double norm2(const QVector& v);
double norm(const QVector& v);

bool all_finite(const QVector& v);

/// e_k of length n (zero based index).
QVector unit_vector(std::size_t n, std::size_t k);

}  // namespace qpr
