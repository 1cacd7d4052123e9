#pragma once

#include <array>
#include <vector>

#include "qpr/solvers.hpp"

namespace qpr {

/// Component planes of a quaternion vector, z = re + pi i + pj j + pk k.
struct SplitVector {
  std::vector<double> re, pi, pj, pk;
};

SplitVector split(const QVector& z);
QVector assemble(const SplitVector& s);

/// Result of the phase-factor estimate for one vector.
struct PhaseFactor {
  Quaternion q;            ///< unit factor; output is Im(z conj(q))
  double residual = 0.0;   ///< ||Re(z conj(q))||^2, the smallest eigenvalue of M^T M
};

/// Unit q minimizing ||Re(z conj(q))||. Built from the 4x4 Gram matrix of the
/// planes [re, pi, pj, pk].
PhaseFactor phase_factor(const QVector& z);

/// Pure projection: Im(z conj(q)) with q from phase_factor. A zero vector is
/// returned unchanged.
QVector qpfe(const QVector& z);

/// Imaginary part of every component.
QVector imag_part(const QVector& z);

struct PureConfig {
  int project_every = 10;  ///< project after update i when i % project_every == 0
};

/// Solver run with periodic pure projection; errors are sign distances.
RunRecord run_pure(const MeasurementEnsemble& ens, QVector z0, const SolverConfig& cfg, const PureConfig& pure,
                   RngStream rng);

/// Initialization (cfg.init or default_init) followed by run_pure().
RunRecord solve_pure(const MeasurementEnsemble& ens, const SolverConfig& cfg, const PureConfig& pure,
                     RngStream rng);

}  // namespace qpr
