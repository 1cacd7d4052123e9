#pragma once

#include <cmath>
#include <vector>

#include "qpr/linalg.hpp"
#include "qpr/qmatrix.hpp"
#include "qpr/rng.hpp"

namespace qpr::testing {

inline Quaternion random_quaternion(RngStream& rng) { return {rng.normal(), rng.normal(), rng.normal(), rng.normal()}; }

inline Quaternion random_unit(RngStream& rng) {
  Quaternion q;
  do {
    q = random_quaternion(rng);
  } while (abs(q) < 1e-8);
  return q / abs(q);
}

inline QVector random_vector(RngStream& rng, std::size_t d) {
  QVector v(d);
  for (auto& q : v) q = random_quaternion(rng);
  return v;
}

inline double max_abs_diff(const Quaternion& p, const Quaternion& q) {
  return std::max({std::abs(p.a - q.a), std::abs(p.b - q.b), std::abs(p.c - q.c), std::abs(p.d - q.d)});
}

/// Orthonormal columns (w.r.t. sum conj(u) v) by Gram-Schmidt with right
/// scalar projections, applied twice for stability.
inline std::vector<QVector> random_orthonormal(RngStream& rng, std::size_t d) {
  std::vector<QVector> u;
  for (std::size_t k = 0; k < d; ++k) {
    QVector v = random_vector(rng, d);
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& w : u) v -= w * inner(w, v);
    }
    v *= 1.0 / norm(v);
    u.push_back(std::move(v));
  }
  return u;
}

/// sum_k lambda_k u_k u_k^*
inline QMatrix from_spectrum(const std::vector<QVector>& u, const std::vector<double>& lambda) {
  const std::size_t d = u.front().size();
  QMatrix m(d, d);
  for (std::size_t k = 0; k < u.size(); ++k) mat_scale_add(m, lambda[k], outer(u[k], u[k]));
  mirror_upper(m);
  return m;
}

}  // namespace qpr::testing
