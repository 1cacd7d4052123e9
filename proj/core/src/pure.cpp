#include "qpr/pure.hpp"

#include <chrono>
#include <stdexcept>

namespace qpr {

SplitVector split(const QVector& z) {
  SplitVector s;
  const std::size_t d = z.size();
  s.re.resize(d);
  s.pi.resize(d);
  s.pj.resize(d);
  s.pk.resize(d);
  for (std::size_t l = 0; l < d; ++l) {
    s.re[l] = z[l].a;
    s.pi[l] = z[l].b;
    s.pj[l] = z[l].c;
    s.pk[l] = z[l].d;
  }
  return s;
}

QVector assemble(const SplitVector& s) {
  const std::size_t d = s.re.size();
  if (s.pi.size() != d || s.pj.size() != d || s.pk.size() != d) {
    throw std::invalid_argument("assemble: component planes differ in length");
  }
  QVector z(d);
  for (std::size_t l = 0; l < d; ++l) z[l] = Quaternion{s.re[l], s.pi[l], s.pj[l], s.pk[l]};
  return z;
}

PhaseFactor phase_factor(const QVector& z) {
  Mat4 w{};
  for (const Quaternion& q : z) {
    const Vec4 m{q.a, q.b, q.c, q.d};
    for (int r = 0; r < 4; ++r) {
      for (int c = r; c < 4; ++c) w[r][c] += m[r] * m[c];
    }
  }
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < r; ++c) w[r][c] = w[c][r];
  }
  const SmallestPair sp = sym4_smallest(w);
  return {Quaternion{sp.vector[0], sp.vector[1], sp.vector[2], sp.vector[3]}, sp.value};
}

QVector imag_part(const QVector& z) {
  QVector out = z;
  for (auto& q : out) q.a = 0.0;
  return out;
}

QVector qpfe(const QVector& z) {
  if (norm2(z) == 0.0) return z;
  return imag_part(z * conj(phase_factor(z).q));
}

RunRecord run_pure(const MeasurementEnsemble& ens, QVector z0, const SolverConfig& cfg, const PureConfig& pure,
                   RngStream rng) {
  if (pure.project_every < 1) throw std::invalid_argument("run_pure: projection period must be >= 1");
  const int period = pure.project_every;
  return run_loop(ens, std::move(z0), cfg, std::move(rng), ErrorMetric::sign,
                  [period](int i, SolverIteration& state) {
                    if (i % period != 0 || norm2(state.iterate()) == 0.0) return;
                    // rotate momentum history along with the iterate
                    state.right_multiply(conj(phase_factor(state.iterate()).q));
                    state.replace_iterate(imag_part(state.iterate()));
                  });
}

RunRecord solve_pure(const MeasurementEnsemble& ens, const SolverConfig& cfg, const PureConfig& pure,
                     RngStream rng) {
  const auto start = std::chrono::steady_clock::now();
  QVector z0 = initialize(ens, default_init(cfg, ens.n()));
  RunRecord rec = run_pure(ens, std::move(z0), cfg, pure, std::move(rng));
  rec.wall_time_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

}  // namespace qpr
