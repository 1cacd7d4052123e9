#pragma once

#include <cmath>
#include <iosfwd>

namespace qpr {

/// Hamilton quaternion a + b i + c j + d k stored as four doubles.
struct Quaternion {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double d = 0.0;

  constexpr Quaternion() = default;
  constexpr Quaternion(double re) : a(re) {}
  constexpr Quaternion(double re, double i, double j, double k) : a(re), b(i), c(j), d(k) {}

  static constexpr Quaternion i() { return {0.0, 1.0, 0.0, 0.0}; }
  static constexpr Quaternion j() { return {0.0, 0.0, 1.0, 0.0}; }
  static constexpr Quaternion k() { return {0.0, 0.0, 0.0, 1.0}; }

  constexpr double real() const { return a; }
  constexpr Quaternion vector_part() const { return {0.0, b, c, d}; }

  constexpr Quaternion& operator+=(const Quaternion& q) {
    a += q.a;
    b += q.b;
    c += q.c;
    d += q.d;
    return *this;
  }
  constexpr Quaternion& operator-=(const Quaternion& q) {
    a -= q.a;
    b -= q.b;
    c -= q.c;
    d -= q.d;
    return *this;
  }
  constexpr Quaternion& operator*=(double s) {
    a *= s;
    b *= s;
    c *= s;
    d *= s;
    return *this;
  }

  friend constexpr bool operator==(const Quaternion&, const Quaternion&) = default;
};

constexpr Quaternion operator+(Quaternion p, const Quaternion& q) { return p += q; }
constexpr Quaternion operator-(Quaternion p, const Quaternion& q) { return p -= q; }
constexpr Quaternion operator-(const Quaternion& q) { return {-q.a, -q.b, -q.c, -q.d}; }
constexpr Quaternion operator*(Quaternion q, double s) { return q *= s; }
constexpr Quaternion operator*(double s, Quaternion q) { return q *= s; }
constexpr Quaternion operator/(Quaternion q, double s) { return q *= (1.0 / s); }

/// Hamilton product; ij = k, jk = i, ki = j.
constexpr Quaternion operator*(const Quaternion& p, const Quaternion& q) {
  return {p.a * q.a - p.b * q.b - p.c * q.c - p.d * q.d,
          p.a * q.b + p.b * q.a + p.c * q.d - p.d * q.c,
          p.a * q.c - p.b * q.d + p.c * q.a + p.d * q.b,
          p.a * q.d + p.b * q.c - p.c * q.b + p.d * q.a};
}

constexpr Quaternion conj(const Quaternion& q) { return {q.a, -q.b, -q.c, -q.d}; }

/// conj(p) * q without forming the conjugate.
constexpr Quaternion conj_mul(const Quaternion& p, const Quaternion& q) {
  return {p.a * q.a + p.b * q.b + p.c * q.c + p.d * q.d,
          p.a * q.b - p.b * q.a - p.c * q.d + p.d * q.c,
          p.a * q.c + p.b * q.d - p.c * q.a - p.d * q.b,
          p.a * q.d - p.b * q.c + p.c * q.b - p.d * q.a};
}

constexpr double norm2(const Quaternion& q) { return q.a * q.a + q.b * q.b + q.c * q.c + q.d * q.d; }
inline double abs(const Quaternion& q) { return std::sqrt(norm2(q)); }

/// w / |w| for nonzero w; sign(0) = 1.
inline Quaternion sign(const Quaternion& q) {
  const double m = abs(q);
  if (m == 0.0) return Quaternion{1.0};
  return q / m;
}

inline bool is_finite(const Quaternion& q) {
  return std::isfinite(q.a) && std::isfinite(q.b) && std::isfinite(q.c) && std::isfinite(q.d);
}

std::ostream& operator<<(std::ostream& os, const Quaternion& q);

}  // namespace qpr
