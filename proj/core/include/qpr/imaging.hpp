#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "qpr/pure.hpp"

namespace qpr {

/// 8-bit RGB raster, interleaved, row-major.
struct RgbImage {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::uint8_t> data;

  RgbImage() = default;
  RgbImage(std::size_t w, std::size_t h) : width(w), height(h), data(3 * w * h, 0) {}

  std::uint8_t& at(std::size_t x, std::size_t y, int c) { return data[3 * (y * width + x) + c]; }
  std::uint8_t at(std::size_t x, std::size_t y, int c) const { return data[3 * (y * width + x) + c]; }

  friend bool operator==(const RgbImage&, const RgbImage&) = default;
};

/// Rejects files with an alpha channel. Grayscale input is expanded to RGB.
RgbImage read_png(const std::filesystem::path& path);
void write_png(const RgbImage& image, const std::filesystem::path& path);

/// Deterministic smooth test picture with edges and a few flat regions.
RgbImage make_test_image(std::size_t width, std::size_t height);

/// An image cut into square blocks. Blocks are in row-major order, pixels in
/// a block are row-major, and pixel (R,G,B) maps to (R i + G j + B k) / 255.
struct ImageJob {
  std::size_t width = 0;
  std::size_t height = 0;
  std::size_t block_side = 0;
  std::vector<QVector> blocks;

  std::size_t blocks_across() const { return width / block_side; }
};

/// Throws std::invalid_argument unless both dimensions are multiples of
/// block_side.
ImageJob decompose(const RgbImage& image, std::size_t block_side);

/// Writes blocks back into a raster using the layout of `job`. Channels are
/// clamped to [0, 1] (NaN to 0) and rounded to 8 bits.
RgbImage reassemble(const ImageJob& job, const std::vector<QVector>& blocks);
inline RgbImage reassemble(const ImageJob& job) { return reassemble(job, job.blocks); }

inline constexpr double kPsnrCap = 100.0;

/// 10 log10(255^2 / MSE) over all pixels and channels; kPsnrCap when the
/// images are identical (and never above it).
double psnr(const RgbImage& a, const RgbImage& b);

/// Mean SSIM over the three channels, 11x11 Gaussian window (sigma 1.5),
/// valid region only, C1 = (0.01*255)^2, C2 = (0.03*255)^2. Clamped to
/// [0, 1]. Both sides must be at least 11 pixels.
double ssim(const RgbImage& a, const RgbImage& b);

struct BlockStatus {
  std::size_t block = 0;
  bool converged = false;
  int iters = 0;
  double final_error = 0.0;
};

struct ImageMetrics {
  double psnr = 0.0;
  double ssim = 0.0;
  std::vector<BlockStatus> per_block;
};

struct ImageRecovery {
  RgbImage image;
  ImageMetrics metrics;
};

enum class SignResolution {
  truth,              ///< sign closest to the true block
  nonnegative_mean,   ///< sign giving a nonnegative mean channel value
};

/// How many real measurements the concatenation baseline uses for a block
/// of d pixels.
enum class ConcMeasurements {
  per_channel,  ///< n = ratio * d, the count one channel gets in the mono model
  stacked,      ///< n = ratio * 3d
};

struct ImageOptions {
  double ratio = 9.0;
  SignResolution sign = SignResolution::truth;
  std::uint64_t seed = 1;
  unsigned threads = 0;  ///< 0 = hardware concurrency
  ConcMeasurements conc = ConcMeasurements::per_channel;
};

/// Per block: fresh quaternion Gaussian ensemble, run_pure, phase-factor
/// projection of the result, sign resolution. Block b uses stream (seed, b).
ImageRecovery recover_image(const ImageJob& job, const SolverConfig& cfg, const PureConfig& pure,
                            const ImageOptions& opts);

/// Real reweighted amplitude flow parameters (step 2, beta 10).
SolverConfig real_raf_defaults();

/// Monochromatic model: the i, j, k planes of the pure signal p are
/// recovered as three real signals with separate real Gaussian ensembles of
/// n = ratio * d, iterated in lockstep. The error is
/// sqrt(sum_h dist(p_h, z_h)^2) / ||p||. The estimate holds each channel in
/// its i, j or k slot with its own unresolved sign.
RunRecord raf_mono_signal(const QVector& p, double ratio, const SolverConfig& cfg, RngStream rng);

/// Concatenation model: one real signal of length 3d.
RunRecord raf_conc_signal(const QVector& p, double ratio, const SolverConfig& cfg, RngStream rng,
                          ConcMeasurements measurements = ConcMeasurements::per_channel);

ImageRecovery raf_mono(const ImageJob& job, const SolverConfig& cfg, const ImageOptions& opts);
ImageRecovery raf_conc(const ImageJob& job, const SolverConfig& cfg, const ImageOptions& opts);

/// "block,converged,iters,final_error" rows, then "psnr,ssim" and one value
/// line.
void write_metrics_csv(const ImageMetrics& metrics, const std::filesystem::path& path);

}  // namespace qpr
