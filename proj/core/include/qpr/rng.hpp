#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace qpr {

/// Independent random stream keyed by (seed, stream). Two streams with the
/// same key produce identical sequences; different keys are decorrelated by
/// a SplitMix64 scramble before seeding the engine.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  /// Standard normal draw (Box-Muller, second variate cached).
  double normal();

  /// Uniform double in [0, 1).
  double uniform();

  /// Uniform index in [0, n).
  std::size_t index(std::size_t n);

  /// A child stream derived from this stream's key and `tag`; does not
  /// consume state from this stream.
  RngStream derive(std::uint64_t tag) const;

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

}  // namespace qpr
