#include "qpr/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace qpr {

HermitianQMatrix::HermitianQMatrix(QMatrix m, double tol) : m_(std::move(m)) {
  if (m_.rows() != m_.cols()) {
    throw std::invalid_argument("HermitianQMatrix: matrix is " + std::to_string(m_.rows()) + "x" +
                                std::to_string(m_.cols()));
  }
  double scale = 0.0;
  for (const auto& q : m_.entries()) scale = std::max(scale, abs(q));
  if (hermitian_defect(m_) > tol * std::max(scale, 1.0)) {
    throw std::invalid_argument("HermitianQMatrix: matrix is not Hermitian");
  }
}

EigenPair power_leading(const HermitianQMatrix& s, int iters, std::vector<double>* rayleigh_history) {
  if (iters < 1) throw std::invalid_argument("power_leading: iters must be >= 1");
  const std::size_t d = s.dim();
  if (d == 0) throw std::invalid_argument("power_leading: empty matrix");

  QVector v(d, Quaternion{1.0 / std::sqrt(static_cast<double>(d))});
  QVector sv;
  for (int it = 0; it < iters; ++it) {
    sv = s.apply(v);
    const double len = norm(sv);
    if (!(len > 0.0) || !std::isfinite(len)) {
      throw std::invalid_argument("power_leading: iterate annihilated (zero matrix or null start direction)");
    }
    v = sv * (1.0 / len);
    if (rayleigh_history != nullptr) rayleigh_history->push_back(inner(v, s.apply(v)).a);
  }
  const double value = inner(v, s.apply(v)).a;
  return {value, std::move(v)};
}

SymmetricEigen jacobi_eigen(std::vector<double> a, std::size_t n) {
  if (a.size() != n * n) throw std::invalid_argument("jacobi_eigen: storage does not match n");
  auto at = [&](std::size_t r, std::size_t c) -> double& { return a[r * n + c]; };

  std::vector<double> v(n * n, 0.0);
  for (std::size_t k = 0; k < n; ++k) v[k * n + k] = 1.0;

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    double diag = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      diag += at(r, r) * at(r, r);
      for (std::size_t c = r + 1; c < n; ++c) off += at(r, c) * at(r, c);
    }
    if (off == 0.0 || off <= 1e-32 * diag) break;

    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = at(p, q);
        if (apq == 0.0) continue;
        const double theta = (at(q, q) - at(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        for (std::size_t k = 0; k < n; ++k) {
          const double akp = at(k, p);
          const double akq = at(k, q);
          at(k, p) = c * akp - s * akq;
          at(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = at(p, k);
          const double aqk = at(q, k);
          at(p, k) = c * apk - s * aqk;
          at(q, k) = s * apk + c * aqk;
        }
        at(p, q) = 0.0;
        at(q, p) = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v[k * n + p];
          const double vkq = v[k * n + q];
          v[k * n + p] = c * vkp - s * vkq;
          v[k * n + q] = s * vkp + c * vkq;
        }
      }
    }
  }

  SymmetricEigen out;
  out.values.resize(n);
  for (std::size_t k = 0; k < n; ++k) out.values[k] = at(k, k);
  out.vectors = std::move(v);
  return out;
}

std::vector<double> complex_adjoint_eig(const HermitianQMatrix& s) {
  const std::size_t d = s.dim();
  const std::size_t m = 2 * d;  // complex adjoint size
  const std::size_t r = 2 * m;  // real embedding size
  using cx = std::complex<double>;

  std::vector<cx> adj(m * m);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      const Quaternion q = s.matrix()(i, j);
      const cx a1(q.a, q.b);
      const cx a2(q.c, q.d);
      adj[i * m + j] = a1;
      adj[i * m + (d + j)] = a2;
      adj[(d + i) * m + j] = -std::conj(a2);
      adj[(d + i) * m + (d + j)] = std::conj(a1);
    }
  }

  // X + iY  ->  [[X, -Y], [Y, X]]
  std::vector<double> real(r * r);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const cx z = adj[i * m + j];
      real[i * r + j] = z.real();
      real[i * r + (m + j)] = -z.imag();
      real[(m + i) * r + j] = z.imag();
      real[(m + i) * r + (m + j)] = z.real();
    }
  }

  auto eig = jacobi_eigen(std::move(real), r);
  std::sort(eig.values.begin(), eig.values.end());
  // The real embedding doubles every eigenvalue of the complex adjoint.
  std::vector<double> out(m);
  for (std::size_t k = 0; k < m; ++k) out[k] = 0.5 * (eig.values[2 * k] + eig.values[2 * k + 1]);
  return out;
}

SmallestPair sym4_smallest(const Mat4& w) {
  for (std::size_t r = 0; r < 4; ++r) {
    for (std::size_t c = r + 1; c < 4; ++c) {
      if (std::abs(w[r][c] - w[c][r]) > 1e-10) throw std::invalid_argument("sym4_smallest: matrix is not symmetric");
    }
  }
  std::vector<double> a(16);
  for (std::size_t r = 0; r < 4; ++r) {
    for (std::size_t c = 0; c < 4; ++c) a[r * 4 + c] = 0.5 * (w[r][c] + w[c][r]);
  }
  const auto eig = jacobi_eigen(std::move(a), 4);

  std::size_t best = 0;
  for (std::size_t k = 1; k < 4; ++k) {
    if (eig.values[k] < eig.values[best]) best = k;
  }

  SmallestPair out;
  out.value = eig.values[best];
  double len = 0.0;
  for (std::size_t k = 0; k < 4; ++k) {
    out.vector[k] = eig.vectors[k * 4 + best];
    len += out.vector[k] * out.vector[k];
  }
  len = std::sqrt(len);
  for (auto& x : out.vector) x /= len;
  for (const double x : out.vector) {
    if (std::abs(x) > 1e-12) {
      if (x < 0.0) {
        for (auto& y : out.vector) y = -y;
      }
      break;
    }
  }
  return out;
}

}  // namespace qpr
