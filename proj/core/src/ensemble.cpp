#include "qpr/ensemble.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <stdexcept>
#include <string>

namespace qpr {

namespace {

constexpr std::string_view kInstanceMagic = "QPR-INSTANCE v1";

}  // namespace

std::string_view to_string(SignalKind kind) { return kind == SignalKind::pure ? "pure" : "full"; }

SignalKind parse_signal_kind(std::string_view name) {
  if (name == "full") return SignalKind::full;
  if (name == "pure") return SignalKind::pure;
  throw std::invalid_argument("unknown signal kind '" + std::string(name) + "'");
}

Quaternion sample_quaternion_gaussian(RngStream& rng) {
  const double a = rng.normal();
  const double b = rng.normal();
  const double c = rng.normal();
  const double d = rng.normal();
  return Quaternion{0.5 * a, 0.5 * b, 0.5 * c, 0.5 * d};
}

std::size_t measurement_count(std::size_t d, double ratio) {
  if (d < 1) throw std::invalid_argument("measurement_count: d must be >= 1");
  if (!(ratio >= 1.0)) throw std::invalid_argument("measurement_count: ratio must be >= 1");
  return static_cast<std::size_t>(std::llround(ratio * static_cast<double>(d)));
}

MeasurementEnsemble make_ensemble_for(const QVector& x, std::size_t n, RngStream& rng, EntryLaw law,
                                      SignalKind kind) {
  if (x.empty() || n == 0) throw std::invalid_argument("make_ensemble_for: empty signal or no measurements");
  MeasurementEnsemble ens;
  ens.a = QMatrix(n, x.size());
  for (auto& q : ens.a.entries()) {
    q = law == EntryLaw::quaternion_gaussian ? sample_quaternion_gaussian(rng) : Quaternion{rng.normal()};
  }
  ens.psi = measure(ens.a, x);
  ens.x_true = x;
  ens.kind = kind;
  ens.seed = rng.seed();
  return ens;
}

MeasurementEnsemble make_instance(std::size_t d, double ratio, RngStream& rng, SignalKind kind) {
  const std::size_t n = measurement_count(d, ratio);
  QVector x(d);
  for (auto& q : x) {
    q = Quaternion{rng.normal(), rng.normal(), rng.normal(), rng.normal()};
    if (kind == SignalKind::pure) q.a = 0.0;
  }
  x *= 1.0 / norm(x);
  return make_ensemble_for(x, n, rng, EntryLaw::quaternion_gaussian, kind);
}

double estimate_norm(std::span<const double> psi) {
  if (psi.empty()) throw std::invalid_argument("estimate_norm: no amplitudes");
  double s = 0.0;
  for (const double p : psi) s += p * p;
  return std::sqrt(s / static_cast<double>(psi.size()));
}

std::vector<double> measure(const QMatrix& a, const QVector& z) {
  if (a.cols() != z.size()) {
    throw std::invalid_argument("measure: signal length " + std::to_string(z.size()) + " does not match " +
                                std::to_string(a.cols()) + " columns");
  }
  std::vector<double> out(a.rows());
  for (std::size_t k = 0; k < a.rows(); ++k) out[k] = abs(inner(a.row(k), z.span()));
  return out;
}

void save_instance(const MeasurementEnsemble& ens, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  out << kInstanceMagic << '\n';
  out << ens.n() << ' ' << ens.d() << ' ' << to_string(ens.kind) << ' ' << ens.seed << ' '
      << (ens.x_true ? 1 : 0) << '\n';
  auto put = [&out](const Quaternion& q, bool last) {
    out << q.a << ' ' << q.b << ' ' << q.c << ' ' << q.d << (last ? '\n' : ' ');
  };
  for (std::size_t k = 0; k < ens.n(); ++k) {
    const auto row = ens.alpha(k);
    for (std::size_t l = 0; l < row.size(); ++l) put(row[l], l + 1 == row.size());
  }
  for (std::size_t k = 0; k < ens.psi.size(); ++k) out << ens.psi[k] << (k + 1 == ens.psi.size() ? '\n' : ' ');
  if (ens.x_true) {
    for (std::size_t l = 0; l < ens.x_true->size(); ++l) put((*ens.x_true)[l], l + 1 == ens.x_true->size());
  }
  if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

MeasurementEnsemble load_instance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  std::string magic;
  std::getline(in, magic);
  if (magic != kInstanceMagic) throw std::runtime_error("'" + path.string() + "' is not an instance file");

  std::size_t n = 0;
  std::size_t d = 0;
  std::string kind;
  int has_x = 0;
  MeasurementEnsemble ens;
  if (!(in >> n >> d >> kind >> ens.seed >> has_x) || n == 0 || d == 0) {
    throw std::runtime_error("malformed instance header in '" + path.string() + "'");
  }
  ens.kind = parse_signal_kind(kind);
  auto get = [&in](Quaternion& q) { in >> q.a >> q.b >> q.c >> q.d; };
  ens.a = QMatrix(n, d);
  for (auto& q : ens.a.entries()) get(q);
  ens.psi.resize(n);
  for (auto& p : ens.psi) in >> p;
  if (has_x != 0) {
    QVector x(d);
    for (auto& q : x) get(q);
    ens.x_true = std::move(x);
  }
  if (!in) throw std::runtime_error("truncated instance file '" + path.string() + "'");
  return ens;
}

}  // namespace qpr
