#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <stdexcept>

#include "qpr/imaging.hpp"

namespace qpr {

namespace {

void require_same_shape(const RgbImage& a, const RgbImage& b) {
  if (a.width != b.width || a.height != b.height || a.data.size() != b.data.size()) {
    throw std::invalid_argument("image metrics: dimensions differ");
  }
  if (a.data.empty()) throw std::invalid_argument("image metrics: empty image");
}

constexpr int kWindow = 11;

std::array<double, kWindow> gaussian_taps() {
  std::array<double, kWindow> t{};
  double s = 0.0;
  for (int i = 0; i < kWindow; ++i) {
    const double x = i - kWindow / 2;
    t[i] = std::exp(-x * x / (2.0 * 1.5 * 1.5));
    s += t[i];
  }
  for (auto& v : t) v /= s;
  return t;
}

/// Separable valid-region filter of a w x h plane.
std::vector<double> filter_valid(const std::vector<double>& in, std::size_t w, std::size_t h,
                                 const std::array<double, kWindow>& taps) {
  const std::size_t ow = w - kWindow + 1;
  const std::size_t oh = h - kWindow + 1;
  std::vector<double> rows(ow * h);
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < ow; ++x) {
      double s = 0.0;
      for (int t = 0; t < kWindow; ++t) s += taps[t] * in[y * w + x + t];
      rows[y * ow + x] = s;
    }
  }
  std::vector<double> out(ow * oh);
  for (std::size_t y = 0; y < oh; ++y) {
    for (std::size_t x = 0; x < ow; ++x) {
      double s = 0.0;
      for (int t = 0; t < kWindow; ++t) s += taps[t] * rows[(y + t) * ow + x];
      out[y * ow + x] = s;
    }
  }
  return out;
}

double ssim_channel(const RgbImage& a, const RgbImage& b, int c, const std::array<double, kWindow>& taps) {
  const std::size_t w = a.width;
  const std::size_t h = a.height;
  std::vector<double> x(w * h), y(w * h), xx(w * h), yy(w * h), xy(w * h);
  for (std::size_t i = 0; i < w * h; ++i) {
    x[i] = a.data[3 * i + c];
    y[i] = b.data[3 * i + c];
    xx[i] = x[i] * x[i];
    yy[i] = y[i] * y[i];
    xy[i] = x[i] * y[i];
  }
  const auto mx = filter_valid(x, w, h, taps);
  const auto my = filter_valid(y, w, h, taps);
  const auto sxx = filter_valid(xx, w, h, taps);
  const auto syy = filter_valid(yy, w, h, taps);
  const auto sxy = filter_valid(xy, w, h, taps);
  const double c1 = (0.01 * 255.0) * (0.01 * 255.0);
  const double c2 = (0.03 * 255.0) * (0.03 * 255.0);
  double sum = 0.0;
  for (std::size_t i = 0; i < mx.size(); ++i) {
    const double vx = sxx[i] - mx[i] * mx[i];
    const double vy = syy[i] - my[i] * my[i];
    const double cov = sxy[i] - mx[i] * my[i];
    sum += ((2.0 * mx[i] * my[i] + c1) * (2.0 * cov + c2)) /
           ((mx[i] * mx[i] + my[i] * my[i] + c1) * (vx + vy + c2));
  }
  return sum / static_cast<double>(mx.size());
}

}  // namespace

double psnr(const RgbImage& a, const RgbImage& b) {
  require_same_shape(a, b);
  double se = 0.0;
  for (std::size_t i = 0; i < a.data.size(); ++i) {
    const double e = static_cast<double>(a.data[i]) - static_cast<double>(b.data[i]);
    se += e * e;
  }
  if (se == 0.0) return kPsnrCap;
  const double mse = se / static_cast<double>(a.data.size());
  return std::min(kPsnrCap, 10.0 * std::log10(255.0 * 255.0 / mse));
}

double ssim(const RgbImage& a, const RgbImage& b) {
  require_same_shape(a, b);
  if (a.width < kWindow || a.height < kWindow) throw std::invalid_argument("ssim: image smaller than the 11x11 window");
  const auto taps = gaussian_taps();
  double s = 0.0;
  for (int c = 0; c < 3; ++c) s += ssim_channel(a, b, c, taps);
  return std::clamp(s / 3.0, 0.0, 1.0);
}

void write_metrics_csv(const ImageMetrics& metrics, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out << std::setprecision(17) << "block,converged,iters,final_error\n";
  for (const auto& b : metrics.per_block) {
    out << b.block << ',' << (b.converged ? 1 : 0) << ',' << b.iters << ',' << b.final_error << '\n';
  }
  out << "psnr,ssim\n" << metrics.psnr << ',' << metrics.ssim << '\n';
}

}  // namespace qpr
