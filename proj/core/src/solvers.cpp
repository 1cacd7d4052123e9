#include "qpr/solvers.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace qpr {

namespace {

constexpr std::array kAlgorithms{Algorithm::qwf,  Algorithm::qrwf,  Algorithm::qtaf,  Algorithm::qpaf,
                                 Algorithm::qraf, Algorithm::qiraf, Algorithm::qaraf, Algorithm::qadraf};

/// g = scale * sum_{k in rows} c(k, |u_k|) alpha_k u_k with u_k = <alpha_k, z>.
/// `next_row(i)` yields the i-th row index.
template <class Coefficient, class RowAt>
QVector accumulate_gradient(const MeasurementEnsemble& ens, const QVector& z, std::size_t count, RowAt&& next_row,
                            Coefficient&& coeff) {
  const std::size_t d = ens.d();
  if (z.size() != d) throw std::invalid_argument("gradient: iterate length does not match the ensemble");
  QVector g(d);
  Quaternion* gp = g.data();
  const Quaternion* zp = z.data();
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t k = next_row(i);
    const Quaternion* row = ens.a.row(k).data();
    Quaternion u;
    for (std::size_t l = 0; l < d; ++l) u += conj_mul(row[l], zp[l]);
    const double c = coeff(k, abs(u));
    if (c == 0.0) continue;
    const Quaternion cu = c * u;
    for (std::size_t l = 0; l < d; ++l) gp[l] += row[l] * cu;
  }
  if (count > 0) g *= 1.0 / static_cast<double>(count);
  return g;
}

template <class Coefficient>
QVector full_gradient(const MeasurementEnsemble& ens, const QVector& z, Coefficient&& coeff) {
  return accumulate_gradient(ens, z, ens.n(), [](std::size_t i) { return i; }, std::forward<Coefficient>(coeff));
}

double qraf_coefficient(double m, double psi, double beta) {
  if (m == 0.0) return 0.0;
  return reweight(m, psi, beta) * (1.0 - psi / m);
}

double qrwf_coefficient(double m, double psi) { return m == 0.0 ? 0.0 : 1.0 - psi / m; }

template <class Term>
double average_over_rows(const MeasurementEnsemble& ens, const QVector& z, Term&& term) {
  if (z.size() != ens.d()) throw std::invalid_argument("loss: iterate length does not match the ensemble");
  double s = 0.0;
  for (std::size_t k = 0; k < ens.n(); ++k) s += term(k, abs(inner(ens.alpha(k), z.span())));
  return s / static_cast<double>(ens.n());
}

}  // namespace

std::string_view to_string(Algorithm algo) {
  switch (algo) {
    case Algorithm::qwf:
      return "qwf";
    case Algorithm::qrwf:
      return "qrwf";
    case Algorithm::qtaf:
      return "qtaf";
    case Algorithm::qpaf:
      return "qpaf";
    case Algorithm::qraf:
      return "qraf";
    case Algorithm::qiraf:
      return "qiraf";
    case Algorithm::qaraf:
      return "qaraf";
    case Algorithm::qadraf:
      return "qadraf";
  }
  return "?";
}

Algorithm parse_algorithm(std::string_view name) {
  for (const Algorithm a : kAlgorithms) {
    if (to_string(a) == name) return a;
  }
  throw std::invalid_argument("unknown algorithm '" + std::string(name) + "'");
}

std::span<const Algorithm> all_algorithms() { return kAlgorithms; }

SolverConfig SolverConfig::defaults(Algorithm algo) {
  SolverConfig cfg;
  cfg.algo = algo;
  switch (algo) {
    case Algorithm::qwf:
      break;  // eta = 0.2 n / sum psi, resolved per instance
    case Algorithm::qrwf:
      cfg.eta = 0.8;
      break;
    case Algorithm::qpaf:
      cfg.eta = 2.5;
      cfg.sigma = 2.0;
      break;
    case Algorithm::qtaf:
      cfg.eta = 1.2;
      cfg.gamma_trunc = 0.8;
      break;
    case Algorithm::qraf:
    case Algorithm::qiraf:
      cfg.eta = 6.0;
      cfg.beta = 5.0;
      break;
    case Algorithm::qaraf:
      cfg.eta = 6.0;
      cfg.beta = 5.0;
      cfg.mu = 0.8;
      break;
    case Algorithm::qadraf:
      cfg.beta = 5.0;
      cfg.alpha_ad = 0.009;
      cfg.mu = 1.0;
      cfg.eps_ad = 1e-6;
      break;
  }
  return cfg;
}

void SolverConfig::validate() const {
  if (eta && !(*eta > 0.0)) throw std::invalid_argument("eta must be > 0");
  if (!(beta >= 0.0)) throw std::invalid_argument("beta must be >= 0");
  if (!(mu >= 0.0 && mu <= 1.0)) throw std::invalid_argument("mu must lie in [0, 1]");
  if (!(sigma >= 0.0)) throw std::invalid_argument("sigma must be >= 0");
  if (!(gamma_trunc > 0.0)) throw std::invalid_argument("gamma_trunc must be > 0");
  if (!(alpha_ad > 0.0) || !(eps_ad > 0.0)) throw std::invalid_argument("alpha_ad and eps_ad must be > 0");
  if (!(qtaf_rho > 0.0 && qtaf_rho <= 1.0)) throw std::invalid_argument("qtaf_rho must lie in (0, 1]");
  if (!batch_exp_rule && batch_size == 0) throw std::invalid_argument("batch_size must be >= 1");
  if (max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be > 0");
}

InitConfig default_init(const SolverConfig& cfg, std::size_t n) {
  if (cfg.init) return *cfg.init;
  InitConfig init;
  switch (cfg.algo) {
    case Algorithm::qwf:
      init.kind = InitKind::plain;
      break;
    case Algorithm::qrwf:
      init.kind = InitKind::truncated;
      init.alpha_l = 1.0;
      init.alpha_u = 5.0;
      break;
    case Algorithm::qpaf:
      init.kind = InitKind::exponential;
      init.gamma = 0.5;
      break;
    case Algorithm::qtaf: {
      init.kind = InitKind::weighted_max_corr;
      init.gamma = 0.0;
      const auto card = static_cast<std::size_t>(std::ceil(cfg.qtaf_rho * static_cast<double>(n)));
      init.card_S = std::clamp<std::size_t>(card, 1, n);
      break;
    }
    case Algorithm::qraf:
    case Algorithm::qiraf:
    case Algorithm::qaraf:
    case Algorithm::qadraf:
      init.kind = InitKind::weighted_max_corr;
      init.gamma = 0.5;
      init.card_S = default_card_S(n);
      break;
  }
  return init;
}

double resolve_step(const SolverConfig& cfg, const MeasurementEnsemble& ens) {
  if (cfg.eta) return *cfg.eta;
  if (cfg.algo == Algorithm::qwf) {
    const double sum = std::accumulate(ens.psi.begin(), ens.psi.end(), 0.0);
    if (!(sum > 0.0)) throw std::domain_error("QWF step: amplitudes sum to zero");
    return 0.2 * static_cast<double>(ens.n()) / sum;
  }
  const auto fallback = SolverConfig::defaults(cfg.algo).eta;
  return fallback.value_or(0.0);
}

std::size_t qiraf_batch_size(std::size_t n) {
  const double threshold = static_cast<double>(n) / 4.0 - 1.0;
  std::size_t b = 1;
  while (static_cast<double>(b) <= threshold) b *= 2;
  return b;
}

double dist(const QVector& z, const QVector& x) {
  if (z.size() != x.size()) throw std::invalid_argument("dist: length mismatch");
  const Quaternion w = sign(inner(x, z));
  double s = 0.0;
  for (std::size_t k = 0; k < z.size(); ++k) s += norm2(z[k] - x[k] * w);
  return std::sqrt(s);
}

double dist_pure(const QVector& omega, const QVector& z) {
  if (omega.size() != z.size()) throw std::invalid_argument("dist_pure: length mismatch");
  double plus = 0.0;
  double minus = 0.0;
  for (std::size_t k = 0; k < z.size(); ++k) {
    plus += norm2(z[k] + omega[k]);
    minus += norm2(z[k] - omega[k]);
  }
  return std::sqrt(std::min(plus, minus));
}

double loss_amplitude(const MeasurementEnsemble& ens, const QVector& z) {
  return average_over_rows(ens, z, [&](std::size_t k, double m) {
    const double r = m - ens.psi[k];
    return r * r;
  });
}

double loss_intensity(const MeasurementEnsemble& ens, const QVector& z) {
  return average_over_rows(ens, z, [&](std::size_t k, double m) {
    const double r = m * m - ens.psi[k] * ens.psi[k];
    return r * r;
  });
}

double loss_perturbed(const MeasurementEnsemble& ens, const QVector& z, std::span<const double> eps) {
  if (eps.size() != ens.n()) throw std::invalid_argument("loss_perturbed: eps length does not match n");
  return average_over_rows(ens, z, [&](std::size_t k, double m) {
    const double e2 = eps[k] * eps[k];
    const double r = std::sqrt(m * m + e2) - std::sqrt(ens.psi[k] * ens.psi[k] + e2);
    return r * r;
  });
}

std::vector<double> perturbation(const MeasurementEnsemble& ens, double sigma) {
  std::vector<double> eps(ens.n());
  const double s = std::sqrt(sigma);
  for (std::size_t k = 0; k < ens.n(); ++k) eps[k] = s * ens.psi[k];
  return eps;
}

double reweight(double abs_inner, double psi, double beta) {
  if (psi == 0.0) return 1.0;
  const double r = abs_inner / psi;
  return r / (r + beta);
}

QVector grad_qraf(const MeasurementEnsemble& ens, const QVector& z, double beta) {
  return full_gradient(ens, z, [&](std::size_t k, double m) { return qraf_coefficient(m, ens.psi[k], beta); });
}

QVector grad_qraf_rows(const MeasurementEnsemble& ens, const QVector& z, double beta,
                       std::span<const std::size_t> rows) {
  return accumulate_gradient(
      ens, z, rows.size(), [&](std::size_t i) { return rows[i]; },
      [&](std::size_t k, double m) { return qraf_coefficient(m, ens.psi[k], beta); });
}

QVector grad_qrwf(const MeasurementEnsemble& ens, const QVector& z) {
  return full_gradient(ens, z, [&](std::size_t k, double m) { return qrwf_coefficient(m, ens.psi[k]); });
}

QVector grad_qtaf(const MeasurementEnsemble& ens, const QVector& z, double gamma_trunc) {
  return full_gradient(ens, z, [&](std::size_t k, double m) {
    const double psi = ens.psi[k];
    if (m == 0.0 || m < psi / (1.0 + gamma_trunc)) return 0.0;
    return 1.0 - psi / m;
  });
}

QVector grad_qpaf(const MeasurementEnsemble& ens, const QVector& z, double sigma) {
  return full_gradient(ens, z, [&](std::size_t k, double m) {
    const double psi2 = ens.psi[k] * ens.psi[k];
    const double e2 = sigma * psi2;
    const double denom = std::sqrt(m * m + e2);
    if (denom == 0.0) return 0.0;
    return 1.0 - std::sqrt(psi2 + e2) / denom;
  });
}

QVector grad_qwf(const MeasurementEnsemble& ens, const QVector& z) {
  return full_gradient(ens, z, [&](std::size_t k, double m) { return m * m - ens.psi[k] * ens.psi[k]; });
}

SolverIteration::SolverIteration(const MeasurementEnsemble& ens, QVector z0, const SolverConfig& cfg, RngStream rng)
    : ens_(ens), cfg_(cfg), rng_(std::move(rng)), z_(std::move(z0)) {
  cfg_.validate();
  if (z_.size() != ens_.d()) throw std::invalid_argument("solver: initial iterate length does not match d");
  eta_ = resolve_step(cfg_, ens_);
  if (cfg_.algo == Algorithm::qiraf) {
    batch_ = cfg_.batch_exp_rule ? qiraf_batch_size(ens_.n()) : cfg_.batch_size;
    rows_.resize(batch_);
  }
  if (cfg_.algo == Algorithm::qaraf) prev_ = z_;
}

QVector SolverIteration::gradient_at(const QVector& z) {
  switch (cfg_.algo) {
    case Algorithm::qwf:
      return grad_qwf(ens_, z);
    case Algorithm::qrwf:
      return grad_qrwf(ens_, z);
    case Algorithm::qtaf:
      return grad_qtaf(ens_, z, cfg_.gamma_trunc);
    case Algorithm::qpaf:
      return grad_qpaf(ens_, z, cfg_.sigma);
    case Algorithm::qraf:
    case Algorithm::qaraf:
    case Algorithm::qadraf:
      return grad_qraf(ens_, z, cfg_.beta);
    case Algorithm::qiraf:
      for (auto& r : rows_) r = rng_.index(ens_.n());
      return grad_qraf_rows(ens_, z, cfg_.beta, rows_);
  }
  throw std::logic_error("unhandled algorithm");
}

void SolverIteration::right_multiply(const Quaternion& w) {
  z_ = z_ * w;
  if (!prev_.empty()) prev_ = prev_ * w;
}

void SolverIteration::step() {
  switch (cfg_.algo) {
    case Algorithm::qaraf: {
      // psi_i = z_i + mu (z_i - z_{i-1}); psi_0 = z_0
      QVector lookahead = z_;
      lookahead.axpy(cfg_.mu, z_ - prev_);
      QVector next = lookahead;
      next.axpy(-eta_, gradient_at(lookahead));
      prev_ = std::move(z_);
      z_ = std::move(next);
      break;
    }
    case Algorithm::qadraf: {
      const QVector g = gradient_at(z_);
      adapt_s_ = cfg_.mu * adapt_s_ + (1.0 - cfg_.mu) * norm2(g);
      eta_ = cfg_.alpha_ad / std::sqrt(adapt_s_ + cfg_.eps_ad);
      z_.axpy(-eta_, g);
      break;
    }
    default:
      z_.axpy(-eta_, gradient_at(z_));
      break;
  }
  ++iter_;
}

double relative_error(ErrorMetric metric, const QVector& z, const QVector& x) {
  const double scale = norm(x);
  const double e = metric == ErrorMetric::phase ? dist(z, x) : dist_pure(z, x);
  return scale > 0.0 ? e / scale : e;
}

RunRecord run_loop(const MeasurementEnsemble& ens, QVector z0, const SolverConfig& cfg, RngStream rng,
                   ErrorMetric metric, const AfterUpdate& after_update) {
  using clock = std::chrono::steady_clock;
  const auto start = clock::now();

  RunRecord rec;
  SolverIteration state(ens, std::move(z0), cfg, std::move(rng));
  const QVector* truth = ens.x_true ? &*ens.x_true : nullptr;

  auto record = [&](int iter) -> double {
    const double e = relative_error(metric, state.iterate(), *truth);
    if (cfg.trace) rec.trace.push_back({iter, e});
    return e;
  };

  double err = std::numeric_limits<double>::quiet_NaN();
  if (truth != nullptr) err = record(0);
  QVector last_finite = state.iterate();

  if (truth == nullptr || !(err < cfg.tol)) {
    for (int i = 0; i < cfg.max_iters; ++i) {
      state.step();
      if (after_update) after_update(i, state);
      if (!all_finite(state.iterate())) {
        rec.diverged = true;
        err = std::numeric_limits<double>::infinity();
        if (cfg.trace) rec.trace.push_back({i + 1, err});
        break;
      }
      if (truth != nullptr) {
        err = record(i + 1);
        last_finite = state.iterate();
        if (err < cfg.tol) break;
      } else {
        const double change = norm(state.iterate() - last_finite);
        const double base = norm(last_finite);
        last_finite = state.iterate();
        if (base > 0.0 && change / base < 1e-12) break;
      }
    }
  }

  rec.iters_used = state.iteration();
  rec.final_rel_error = err;
  rec.converged = truth != nullptr && !rec.diverged && err < cfg.tol;
  rec.estimate = rec.diverged ? std::move(last_finite) : state.iterate();
  rec.wall_time_ms = std::chrono::duration<double, std::milli>(clock::now() - start).count();
  return rec;
}

RunRecord run(const MeasurementEnsemble& ens, QVector z0, const SolverConfig& cfg, RngStream rng) {
  return run_loop(ens, std::move(z0), cfg, std::move(rng), ErrorMetric::phase);
}

RunRecord solve(const MeasurementEnsemble& ens, const SolverConfig& cfg, RngStream rng) {
  const auto start = std::chrono::steady_clock::now();
  QVector z0 = initialize(ens, default_init(cfg, ens.n()));
  RunRecord rec = run(ens, std::move(z0), cfg, std::move(rng));
  rec.wall_time_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

void write_trace_csv(const std::vector<TracePoint>& trace, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << std::setprecision(17) << "iter,rel_error\n";
  for (const auto& p : trace) out << p.iter << ',' << p.rel_error << '\n';
}

}  // namespace qpr
