#include "qdinpaint/png_io.hpp"

#include <png.h>

#include <cmath>

#include "qdinpaint/error.hpp"

namespace qdi {

namespace {

std::vector<std::uint8_t> decode(const std::filesystem::path& path, png_uint_32 format, int& width, int& height) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&image, path.c_str())) {
    throw Error(ErrorCode::Io, path.string() + ": " + image.message);
  }
  image.format = format;
  std::vector<std::uint8_t> pixels(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, pixels.data(), 0, nullptr)) {
    const std::string msg = image.message;
    png_image_free(&image);
    throw Error(ErrorCode::Io, path.string() + ": " + msg);
  }
  width = static_cast<int>(image.width);
  height = static_cast<int>(image.height);
  return pixels;
}

void encode(const std::filesystem::path& path, const std::uint8_t* pixels, int width, int height,
            png_uint_32 format) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(width);
  image.height = static_cast<png_uint_32>(height);
  image.format = format;
  if (!png_image_write_to_file(&image, path.c_str(), 0, pixels, 0, nullptr)) {
    throw Error(ErrorCode::Io, path.string() + ": " + image.message);
  }
}

std::uint8_t quantize(double v) noexcept {
  const double q = std::round(v * 255.0);
  return static_cast<std::uint8_t>(q < 0.0 ? 0.0 : (q > 255.0 ? 255.0 : q));
}

}  // namespace

Rgb8 read_png_rgb8(const std::filesystem::path& path) {
  Rgb8 img;
  img.pixels = decode(path, PNG_FORMAT_RGB, img.width, img.height);
  return img;
}

Gray8 read_png_gray8(const std::filesystem::path& path) {
  // Channel 0 of the RGB expansion; masks are single-channel in practice.
  Rgb8 rgb = read_png_rgb8(path);
  Gray8 img{rgb.width, rgb.height, std::vector<std::uint8_t>(rgb.pixels.size() / 3)};
  for (std::size_t i = 0; i < img.pixels.size(); ++i) img.pixels[i] = rgb.pixels[3 * i];
  return img;
}

void write_png(const std::filesystem::path& path, const Gray8& img) {
  encode(path, img.pixels.data(), img.width, img.height, PNG_FORMAT_GRAY);
}

void write_png(const std::filesystem::path& path, const Rgb8& img) {
  encode(path, img.pixels.data(), img.width, img.height, PNG_FORMAT_RGB);
}

RgbImage to_rgb_image(const Rgb8& img) {
  std::vector<double> data(img.pixels.size());
  for (std::size_t i = 0; i < data.size(); ++i) data[i] = img.pixels[i] / 255.0;
  return RgbImage::from_data(img.width, img.height, std::move(data));
}

Rgb8 to_rgb8(const RgbImage& img) {
  Rgb8 out{img.width(), img.height(), std::vector<std::uint8_t>(img.size())};
  const auto src = img.data();
  for (std::size_t i = 0; i < src.size(); ++i) out.pixels[i] = quantize(src[i]);
  return out;
}

RgbImage read_image(const std::filesystem::path& path) { return to_rgb_image(read_png_rgb8(path)); }

void write_image(const std::filesystem::path& path, const RgbImage& img) { write_png(path, to_rgb8(img)); }

BinaryMask read_mask(const std::filesystem::path& path, HolePolarity polarity) {
  const Gray8 g = read_png_gray8(path);
  std::vector<std::uint8_t> values(g.pixels.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const bool high = g.pixels[i] >= 128;
    const bool valid = polarity == HolePolarity::HoleIsZero ? high : !high;
    values[i] = valid ? BinaryMask::kValid : BinaryMask::kHole;
  }
  return BinaryMask::from_values(g.width, g.height, std::move(values));
}

Gray8 encode_mask(const BinaryMask& mask, HolePolarity polarity) {
  Gray8 g{mask.width(), mask.height(), std::vector<std::uint8_t>(mask.pixel_count())};
  const auto v = mask.values();
  for (std::size_t i = 0; i < v.size(); ++i) {
    const bool valid = v[i] == BinaryMask::kValid;
    const bool high = polarity == HolePolarity::HoleIsZero ? valid : !valid;
    g.pixels[i] = high ? 255 : 0;
  }
  return g;
}

void write_mask(const std::filesystem::path& path, const BinaryMask& mask, HolePolarity polarity) {
  write_png(path, encode_mask(mask, polarity));
}

}  // namespace qdi
