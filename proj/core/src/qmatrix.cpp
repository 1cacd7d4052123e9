#include "qpr/qmatrix.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace qpr {

QMatrix QMatrix::identity(std::size_t n) {
  QMatrix m(n, n);
  for (std::size_t k = 0; k < n; ++k) m(k, k) = Quaternion{1.0};
  return m;
}

QMatrix conj_transpose(const QMatrix& a) {
  QMatrix t(a.cols(), a.rows());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) t(c, r) = conj(a(r, c));
  }
  return t;
}

QMatrix operator*(const QMatrix& a, const QMatrix& b) {
  if (a.cols() != b.rows()) {
    throw std::invalid_argument("matrix product: " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                                " times " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  }
  QMatrix out(a.rows(), b.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t m = 0; m < a.cols(); ++m) {
      const Quaternion lhs = a(r, m);
      for (std::size_t c = 0; c < b.cols(); ++c) out(r, c) += lhs * b(m, c);
    }
  }
  return out;
}

QVector mat_vec(const QMatrix& a, const QVector& v) {
  if (a.cols() != v.size()) {
    throw std::invalid_argument("mat_vec: matrix has " + std::to_string(a.cols()) + " columns, vector has " +
                                std::to_string(v.size()) + " entries");
  }
  QVector out(a.rows());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    Quaternion acc;
    const auto row = a.row(r);
    for (std::size_t c = 0; c < a.cols(); ++c) acc += row[c] * v[c];
    out[r] = acc;
  }
  return out;
}

QMatrix outer(const QVector& u, const QVector& v) {
  QMatrix out(u.size(), v.size());
  for (std::size_t r = 0; r < u.size(); ++r) {
    for (std::size_t c = 0; c < v.size(); ++c) out(r, c) = u[r] * conj(v[c]);
  }
  return out;
}

void mat_scale_add(QMatrix& dst, double s, const QMatrix& src) {
  if (dst.rows() != src.rows() || dst.cols() != src.cols()) {
    throw std::invalid_argument("mat_scale_add: shape mismatch");
  }
  auto& d = dst.entries();
  const auto& e = src.entries();
  for (std::size_t k = 0; k < d.size(); ++k) d[k] += s * e[k];
}

void add_rank_one_upper(QMatrix& dst, double w, std::span<const Quaternion> alpha) {
  const std::size_t n = dst.rows();
  if (dst.cols() != n || alpha.size() != n) throw std::invalid_argument("add_rank_one_upper: shape mismatch");
  for (std::size_t r = 0; r < n; ++r) {
    const Quaternion left = w * alpha[r];
    auto row = dst.row(r);
    for (std::size_t c = r; c < n; ++c) row[c] += left * conj(alpha[c]);
  }
}

void mirror_upper(QMatrix& dst) {
  const std::size_t n = dst.rows();
  for (std::size_t r = 0; r < n; ++r) {
    auto& diag = dst(r, r);
    diag = Quaternion{diag.a};
    for (std::size_t c = r + 1; c < n; ++c) dst(c, r) = conj(dst(r, c));
  }
}

double hermitian_defect(const QMatrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("hermitian_defect: matrix is not square");
  double worst = 0.0;
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = r; c < a.cols(); ++c) {
      const Quaternion diff = a(r, c) - conj(a(c, r));
      worst = std::max({worst, std::abs(diff.a), std::abs(diff.b), std::abs(diff.c), std::abs(diff.d)});
    }
  }
  return worst;
}

}  // namespace qpr
