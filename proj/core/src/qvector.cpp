#include "qpr/qvector.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

namespace qpr {

std::ostream& operator<<(std::ostream& os, const Quaternion& q) {
  return os << '(' << q.a << ", " << q.b << "i, " << q.c << "j, " << q.d << "k)";
}

namespace {

void require_same_length(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw std::invalid_argument(std::string(what) + ": length mismatch (" + std::to_string(a) + " vs " +
                                std::to_string(b) + ")");
  }
}

}  // namespace

QVector& QVector::operator+=(const QVector& v) {
  require_same_length(size(), v.size(), "QVector +=");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += v.data_[k];
  return *this;
}

QVector& QVector::operator-=(const QVector& v) {
  require_same_length(size(), v.size(), "QVector -=");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= v.data_[k];
  return *this;
}

QVector& QVector::operator*=(double s) {
  for (auto& q : data_) q *= s;
  return *this;
}

void QVector::axpy(double s, const QVector& v) {
  require_same_length(size(), v.size(), "QVector axpy");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += s * v.data_[k];
}

void QVector::set_zero() {
  for (auto& q : data_) q = Quaternion{};
}

QVector operator+(QVector u, const QVector& v) { return u += v; }
QVector operator-(QVector u, const QVector& v) { return u -= v; }
QVector operator*(QVector v, double s) { return v *= s; }
QVector operator*(double s, QVector v) { return v *= s; }

QVector operator*(const QVector& v, const Quaternion& w) {
  QVector out(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) out[k] = v[k] * w;
  return out;
}

Quaternion inner(std::span<const Quaternion> u, std::span<const Quaternion> v) {
  require_same_length(u.size(), v.size(), "inner");
  Quaternion acc;
  for (std::size_t k = 0; k < u.size(); ++k) acc += conj_mul(u[k], v[k]);
  return acc;
}

double norm2(const QVector& v) {
  double s = 0.0;
  for (const auto& q : v) s += norm2(q);
  return s;
}

double norm(const QVector& v) { return std::sqrt(norm2(v)); }

bool all_finite(const QVector& v) {
  for (const auto& q : v) {
    if (!is_finite(q)) return false;
  }
  return true;
}

QVector unit_vector(std::size_t n, std::size_t k) {
  QVector e(n);
  e[k] = Quaternion{1.0};
  return e;
}

}  // namespace qpr
