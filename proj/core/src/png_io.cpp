#include <png.h>

#include <cmath>
#include <cstring>
#include <stdexcept>
#include <string>

#include "qpr/imaging.hpp"

namespace qpr {

RgbImage read_png(const std::filesystem::path& path) {
  png_image img;
  std::memset(&img, 0, sizeof img);
  img.version = PNG_IMAGE_VERSION;
  if (png_image_begin_read_from_file(&img, path.c_str()) == 0) {
    throw std::runtime_error("cannot read PNG '" + path.string() + "': " + img.message);
  }
  if ((img.format & PNG_FORMAT_FLAG_ALPHA) != 0) {
    png_image_free(&img);
    throw std::runtime_error("'" + path.string() + "' has an alpha channel; only RGB input is supported");
  }
  img.format = PNG_FORMAT_RGB;
  RgbImage out(img.width, img.height);
  if (png_image_finish_read(&img, nullptr, out.data.data(), 0, nullptr) == 0) {
    const std::string msg = img.message;
    png_image_free(&img);
    throw std::runtime_error("cannot decode PNG '" + path.string() + "': " + msg);
  }
  return out;
}

void write_png(const RgbImage& image, const std::filesystem::path& path) {
  if (image.data.size() != 3 * image.width * image.height || image.width == 0 || image.height == 0) {
    throw std::invalid_argument("write_png: raster size does not match its dimensions");
  }
  png_image img;
  std::memset(&img, 0, sizeof img);
  img.version = PNG_IMAGE_VERSION;
  img.width = static_cast<png_uint_32>(image.width);
  img.height = static_cast<png_uint_32>(image.height);
  img.format = PNG_FORMAT_RGB;
  if (png_image_write_to_file(&img, path.c_str(), 0, image.data.data(), 0, nullptr) == 0) {
    throw std::runtime_error("cannot write PNG '" + path.string() + "': " + img.message);
  }
}

RgbImage make_test_image(std::size_t width, std::size_t height) {
  RgbImage img(width, height);
  const double w = static_cast<double>(width);
  const double h = static_cast<double>(height);
  for (std::size_t y = 0; y < height; ++y) {
    for (std::size_t x = 0; x < width; ++x) {
      const double u = static_cast<double>(x) / w;
      const double v = static_cast<double>(y) / h;
      const double r = 0.5 + 0.4 * std::sin(6.0 * u + 2.0 * v);
      const double g = 0.2 + 0.7 * v;
      double b = 0.3 + 0.3 * std::cos(9.0 * u * v);
      const double dx = u - 0.6;
      const double dy = v - 0.4;
      if (dx * dx + dy * dy < 0.04) b = 0.95;  // disk
      const bool square = u > 0.1 && u < 0.35 && v > 0.6 && v < 0.85;
      img.at(x, y, 0) = static_cast<std::uint8_t>(std::lround(255.0 * (square ? 0.1 : r)));
      img.at(x, y, 1) = static_cast<std::uint8_t>(std::lround(255.0 * g));
      img.at(x, y, 2) = static_cast<std::uint8_t>(std::lround(255.0 * b));
    }
  }
  return img;
}

}  // namespace qpr
