#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qpr/ensemble.hpp"
#include "qpr/init.hpp"
#include "qpr/rng.hpp"

namespace qpr {

enum class Algorithm { qwf, qrwf, qtaf, qpaf, qraf, qiraf, qaraf, qadraf };

std::string_view to_string(Algorithm algo);
/// Lowercase identifiers: qwf, qrwf, qtaf, qpaf, qraf, qiraf, qaraf, qadraf.
Algorithm parse_algorithm(std::string_view name);
std::span<const Algorithm> all_algorithms();

/// Iteration parameters. Use SolverConfig::defaults() to get the tuned
/// values for an algorithm; fields that an algorithm does not read are
/// ignored.
struct SolverConfig {
  Algorithm algo = Algorithm::qraf;
  /// Step size. Unset means the per-algorithm default; for QWF that default
  /// is data dependent, 0.2 n / sum_k psi_k.
  std::optional<double> eta;
  double beta = 5.0;         ///< reweighting offset (QRAF family)
  double gamma_trunc = 0.8;  ///< truncation level (QTAF)
  double sigma = 2.0;        ///< perturbation coefficient, eps = sqrt(sigma) psi (QPAF)
  double mu = 0.8;           ///< momentum (QARAF) or decay (QAdRAF)
  double alpha_ad = 0.009;   ///< adaptive step numerator (QAdRAF)
  double eps_ad = 1e-6;      ///< adaptive step floor (QAdRAF)
  bool batch_exp_rule = true;  ///< QIRAF batch = smallest 2^k > n/4 - 1
  std::size_t batch_size = 64;  ///< QIRAF batch when batch_exp_rule is off
  double qtaf_rho = 1.0 / 6.0;  ///< QTAF init subset fraction, |S| = ceil(rho n)
  int max_iters = 1500;
  double tol = 1e-5;
  bool trace = false;
  /// Unset means default_init(algo, n).
  std::optional<InitConfig> init;

  static SolverConfig defaults(Algorithm algo);

  /// Throws std::invalid_argument when a field the algorithm reads is out of range.
  void validate() const;
};

/// Initialization matching the algorithm.
InitConfig default_init(const SolverConfig& cfg, std::size_t n);

/// Step size the run will use on this ensemble.
double resolve_step(const SolverConfig& cfg, const MeasurementEnsemble& ens);

/// Smallest power of two strictly greater than n/4 - 1.
std::size_t qiraf_batch_size(std::size_t n);

struct TracePoint {
  int iter = 0;
  double rel_error = 0.0;
};

struct RunRecord {
  bool converged = false;
  bool diverged = false;
  int iters_used = 0;
  /// dist / ||x|| (or the sign distance for pure runs); NaN without truth,
  /// +inf after divergence.
  double final_rel_error = 0.0;
  double wall_time_ms = 0.0;
  std::vector<TracePoint> trace;
  /// Final iterate, or the last finite one when the run diverged.
  QVector estimate;
};

// Distances -----------------------------------------------------------------

/// min over unit w of ||z - x w||, attained at w = sign(<x, z>).
double dist(const QVector& z, const QVector& x);

/// min(||z + omega||, ||z - omega||).
double dist_pure(const QVector& omega, const QVector& z);

// Losses --------------------------------------------------------------------

double loss_amplitude(const MeasurementEnsemble& ens, const QVector& z);
double loss_intensity(const MeasurementEnsemble& ens, const QVector& z);
double loss_perturbed(const MeasurementEnsemble& ens, const QVector& z, std::span<const double> eps);

/// eps_k = sqrt(sigma) psi_k
std::vector<double> perturbation(const MeasurementEnsemble& ens, double sigma);

// Gradients -----------------------------------------------------------------
//
// Every gradient has the form (1/|rows|) sum_k c_k alpha_k (alpha_k^* z) with
// a real per-row coefficient c_k. Rows where c_k would need 0/0 contribute 0.

QVector grad_qraf(const MeasurementEnsemble& ens, const QVector& z, double beta);
QVector grad_qrwf(const MeasurementEnsemble& ens, const QVector& z);
QVector grad_qtaf(const MeasurementEnsemble& ens, const QVector& z, double gamma_trunc);
QVector grad_qpaf(const MeasurementEnsemble& ens, const QVector& z, double sigma);
QVector grad_qwf(const MeasurementEnsemble& ens, const QVector& z);

/// Reweighted gradient over a mini-batch of row indices (repeats allowed),
/// averaged with 1/|rows|.
QVector grad_qraf_rows(const MeasurementEnsemble& ens, const QVector& z, double beta,
                       std::span<const std::size_t> rows);

/// Reweighting weight r / (r + beta), r = |<alpha, z>| / psi.
double reweight(double abs_inner, double psi, double beta);

// Iteration -----------------------------------------------------------------

/// One solver's evolving state. step() advances by exactly one update.
class SolverIteration {
 public:
  SolverIteration(const MeasurementEnsemble& ens, QVector z0, const SolverConfig& cfg, RngStream rng);

  void step();

  const QVector& iterate() const { return z_; }
  int iteration() const { return iter_; }
  double step_size() const { return eta_; }

  /// Overwrite the current iterate (used by projections). Momentum for the
  /// next step is formed from the replaced value.
  void replace_iterate(QVector z) { z_ = std::move(z); }

  /// Right-multiply the iterate and any stored history by w.
  void right_multiply(const Quaternion& w);

 private:
  QVector gradient_at(const QVector& z);

  const MeasurementEnsemble& ens_;
  SolverConfig cfg_;
  RngStream rng_;
  double eta_ = 0.0;
  std::size_t batch_ = 0;
  int iter_ = 0;
  QVector z_;
  QVector prev_;        // QARAF: z_{i-1}
  double adapt_s_ = 0;  // QAdRAF accumulator
  std::vector<std::size_t> rows_;
};

enum class ErrorMetric {
  phase,  ///< dist
  sign,   ///< dist_pure
};

double relative_error(ErrorMetric metric, const QVector& z, const QVector& x);

/// Called after each update with the 0-based index i of that update.
using AfterUpdate = std::function<void(int i, SolverIteration& state)>;

/// Iterate up to cfg.max_iters from z0. With truth present the relative error
/// is checked after every update (and once before the first) and the run
/// stops when it drops below cfg.tol. Without truth it stops when the
/// relative iterate change falls below 1e-12. A non-finite iterate ends the
/// run as diverged.
RunRecord run_loop(const MeasurementEnsemble& ens, QVector z0, const SolverConfig& cfg, RngStream rng,
                   ErrorMetric metric, const AfterUpdate& after_update = {});

RunRecord run(const MeasurementEnsemble& ens, QVector z0, const SolverConfig& cfg, RngStream rng);

/// Initialization (cfg.init or default_init) followed by run(). Wall time
/// includes the initialization.
RunRecord solve(const MeasurementEnsemble& ens, const SolverConfig& cfg, RngStream rng);

/// "iter,rel_error" CSV.
void write_trace_csv(const std::vector<TracePoint>& trace, const std::string& path);

}  // namespace qpr
