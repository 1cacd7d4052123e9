#include "qpr/init.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace qpr {

namespace {

void require_signal(const MeasurementEnsemble& ens, const char* who) {
  if (ens.psi.size() != ens.n()) throw std::invalid_argument(std::string(who) + ": psi length does not match A");
  if (std::all_of(ens.psi.begin(), ens.psi.end(), [](double p) { return p == 0.0; })) {
    throw std::domain_error(std::string(who) + ": all amplitudes are zero, direction undefined");
  }
}

/// (1/n) sum_k w_k alpha_k alpha_k^*, skipping zero weights.
HermitianQMatrix weighted_sum(const MeasurementEnsemble& ens, const std::vector<double>& w) {
  const std::size_t d = ens.d();
  QMatrix s(d, d);
  const double inv_n = 1.0 / static_cast<double>(ens.n());
  for (std::size_t k = 0; k < ens.n(); ++k) {
    if (w[k] != 0.0) add_rank_one_upper(s, w[k] * inv_n, ens.alpha(k));
  }
  mirror_upper(s);
  return HermitianQMatrix(std::move(s));
}

QVector scaled_leading(const HermitianQMatrix& s, double lambda0, int iters) {
  auto pair = power_leading(s, iters);
  return pair.vector * lambda0;
}

}  // namespace

std::string_view to_string(InitKind kind) {
  switch (kind) {
    case InitKind::weighted_max_corr:
      return "weighted_max_corr";
    case InitKind::truncated:
      return "truncated";
    case InitKind::exponential:
      return "exponential";
    case InitKind::plain:
      return "plain";
  }
  return "?";
}

std::size_t default_card_S(std::size_t n) { return std::max<std::size_t>(1, (3 * n) / 13); }

HermitianQMatrix weighted_max_corr_matrix(const MeasurementEnsemble& ens, const InitConfig& cfg) {
  const std::size_t n = ens.n();
  const std::size_t card = cfg.card_S.value_or(default_card_S(n));
  if (card == 0 || card > n) throw std::invalid_argument("weighted max-correlation init: |S| must be in [1, n]");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  // stable: equal amplitudes keep the lower index first
  std::stable_sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) { return ens.psi[l] > ens.psi[r]; });

  std::vector<double> w(n, 0.0);
  for (std::size_t s = 0; s < card; ++s) w[order[s]] = std::pow(ens.psi[order[s]], cfg.gamma);
  return weighted_sum(ens, w);
}

double truncated_norm_estimate(const MeasurementEnsemble& ens) {
  double l1 = 0.0;
  for (const auto& q : ens.a.entries()) l1 += abs(q);
  if (!(l1 > 0.0)) throw std::invalid_argument("truncated init: sensing matrix is zero");
  const double mean_psi = std::accumulate(ens.psi.begin(), ens.psi.end(), 0.0) / static_cast<double>(ens.n());
  return static_cast<double>(ens.n() * ens.d()) / l1 * mean_psi;
}

HermitianQMatrix truncated_matrix(const MeasurementEnsemble& ens, const InitConfig& cfg, double lambda0) {
  const std::size_t n = ens.n();
  std::vector<double> w(n, 0.0);
  bool any = false;
  for (std::size_t k = 0; k < n; ++k) {
    const double y = ens.psi[k];
    if (cfg.alpha_l * lambda0 < y && y < cfg.alpha_u * lambda0) {
      w[k] = y;
      any = any || y != 0.0;
    }
  }
  if (!any) w = ens.psi;  // empty truncation set: fall back to the full set
  return weighted_sum(ens, w);
}

HermitianQMatrix exponential_matrix(const MeasurementEnsemble& ens, const InitConfig& cfg, double lambda0) {
  std::vector<double> w(ens.n());
  const double inv = 1.0 / (lambda0 * lambda0);
  for (std::size_t k = 0; k < ens.n(); ++k) w[k] = cfg.gamma - std::exp(-ens.psi[k] * ens.psi[k] * inv);
  return weighted_sum(ens, w);
}

HermitianQMatrix plain_matrix(const MeasurementEnsemble& ens) {
  std::vector<double> w(ens.n());
  for (std::size_t k = 0; k < ens.n(); ++k) w[k] = ens.psi[k] * ens.psi[k];
  return weighted_sum(ens, w);
}

QVector init_weighted_max_corr(const MeasurementEnsemble& ens, const InitConfig& cfg) {
  require_signal(ens, "weighted max-correlation init");
  return scaled_leading(weighted_max_corr_matrix(ens, cfg), estimate_norm(ens.psi), cfg.power_iters);
}

QVector init_truncated(const MeasurementEnsemble& ens, const InitConfig& cfg) {
  require_signal(ens, "truncated init");
  if (!(cfg.alpha_l < cfg.alpha_u)) throw std::invalid_argument("truncated init: alpha_l must be below alpha_u");
  const double lambda0 = truncated_norm_estimate(ens);
  return scaled_leading(truncated_matrix(ens, cfg, lambda0), lambda0, cfg.power_iters);
}

QVector init_exponential(const MeasurementEnsemble& ens, const InitConfig& cfg) {
  require_signal(ens, "exponential init");
  const double lambda0 = estimate_norm(ens.psi);
  return scaled_leading(exponential_matrix(ens, cfg, lambda0), lambda0, cfg.power_iters);
}

QVector init_plain(const MeasurementEnsemble& ens, const InitConfig& cfg) {
  require_signal(ens, "plain spectral init");
  return scaled_leading(plain_matrix(ens), estimate_norm(ens.psi), cfg.power_iters);
}

QVector initialize(const MeasurementEnsemble& ens, const InitConfig& cfg) {
  switch (cfg.kind) {
    case InitKind::weighted_max_corr:
      return init_weighted_max_corr(ens, cfg);
    case InitKind::truncated:
      return init_truncated(ens, cfg);
    case InitKind::exponential:
      return init_exponential(ens, cfg);
    case InitKind::plain:
      return init_plain(ens, cfg);
  }
  throw std::invalid_argument("initialize: unknown init kind");
}

}  // namespace qpr
