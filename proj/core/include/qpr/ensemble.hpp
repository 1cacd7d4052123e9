#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "qpr/qmatrix.hpp"
#include "qpr/rng.hpp"

namespace qpr {

enum class SignalKind { full, pure };

std::string_view to_string(SignalKind kind);
SignalKind parse_signal_kind(std::string_view name);

/// Distribution of the sensing-matrix entries.
enum class EntryLaw {
  quaternion_gaussian,  ///< (N + N i + N j + N k) / 2, so E|q|^2 = 1
  real_gaussian,        ///< N(0, 1) in the real part only
};

/// One phase-retrieval problem instance.
///
/// Row k of `a` holds the measurement vector alpha_k, so the k-th amplitude
/// is |<alpha_k, x>| = |sum_l conj(a(k, l)) x_l|.
struct MeasurementEnsemble {
  QMatrix a;
  std::vector<double> psi;
  std::optional<QVector> x_true;
  SignalKind kind = SignalKind::full;
  std::uint64_t seed = 0;

  std::size_t n() const { return a.rows(); }
  std::size_t d() const { return a.cols(); }
  std::span<const Quaternion> alpha(std::size_t k) const { return a.row(k); }
};

Quaternion sample_quaternion_gaussian(RngStream& rng);

/// n = round(ratio * d). x has i.i.d. N(0,1) components (real part zeroed for
/// pure signals) and is normalized to unit norm.
MeasurementEnsemble make_instance(std::size_t d, double ratio, RngStream& rng, SignalKind kind = SignalKind::full);

/// Measure a given signal with n fresh sensing rows.
MeasurementEnsemble make_ensemble_for(const QVector& x, std::size_t n, RngStream& rng,
                                      EntryLaw law = EntryLaw::quaternion_gaussian,
                                      SignalKind kind = SignalKind::full);

std::size_t measurement_count(std::size_t d, double ratio);

/// sqrt(mean psi^2). Throws std::invalid_argument on empty input.
double estimate_norm(std::span<const double> psi);

/// Component-wise |<alpha_k, z>|.
std::vector<double> measure(const QMatrix& a, const QVector& z);

/// Text dump: header line, "n d kind seed has_x", n rows of 4d components,
/// one psi line, then optionally x. Values printed with 17 significant digits
/// so that load(save(e)) == e.
void save_instance(const MeasurementEnsemble& ens, const std::filesystem::path& path);
MeasurementEnsemble load_instance(const std::filesystem::path& path);

}  // namespace qpr
