#pragma once

#include <cstddef>
#include <optional>
#include <string_view>

#include "qpr/ensemble.hpp"
#include "qpr/linalg.hpp"

namespace qpr {

enum class InitKind {
  weighted_max_corr,  ///< top-|S| amplitudes, weights psi^gamma
  truncated,          ///< psi-weighted, alpha_l*lambda0 < psi < alpha_u*lambda0
  exponential,        ///< weights gamma - exp(-psi^2 / lambda0^2)
  plain,              ///< weights psi^2
};

std::string_view to_string(InitKind kind);

struct InitConfig {
  InitKind kind = InitKind::weighted_max_corr;
  /// Weight exponent (weighted_max_corr) or offset (exponential).
  double gamma = 0.5;
  /// Subset size for weighted_max_corr; floor(3n/13) when unset.
  std::optional<std::size_t> card_S;
  double alpha_l = 1.0;
  double alpha_u = 5.0;
  int power_iters = kDefaultPowerIterations;
};

/// Default subset size floor(3n/13), at least 1.
std::size_t default_card_S(std::size_t n);

/// The weighted data matrix each init builds, exposed for tests.
HermitianQMatrix weighted_max_corr_matrix(const MeasurementEnsemble& ens, const InitConfig& cfg);
HermitianQMatrix truncated_matrix(const MeasurementEnsemble& ens, const InitConfig& cfg, double lambda0);
HermitianQMatrix exponential_matrix(const MeasurementEnsemble& ens, const InitConfig& cfg, double lambda0);
HermitianQMatrix plain_matrix(const MeasurementEnsemble& ens);

/// lambda0 = (n d / sum_k ||alpha_k||_1) * mean(psi), with ||.||_1 the sum
/// of entry moduli.
double truncated_norm_estimate(const MeasurementEnsemble& ens);

QVector init_weighted_max_corr(const MeasurementEnsemble& ens, const InitConfig& cfg);
QVector init_truncated(const MeasurementEnsemble& ens, const InitConfig& cfg);
QVector init_exponential(const MeasurementEnsemble& ens, const InitConfig& cfg);
QVector init_plain(const MeasurementEnsemble& ens, const InitConfig& cfg);

/// Dispatch on cfg.kind.
QVector initialize(const MeasurementEnsemble& ens, const InitConfig& cfg);

}  // namespace qpr
