#include "qdinpaint/image.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qdinpaint/error.hpp"

namespace qdi {

namespace {

void check_extent(int width, int height) {
  if (width < 0 || height < 0) {
    throw Error(ErrorCode::InvalidArgument,
                "negative image extent " + std::to_string(width) + "x" + std::to_string(height));
  }
}

}  // namespace

RgbImage::RgbImage(int width, int height, double fill) : width_(width), height_(height) {
  check_extent(width, height);
  data_.assign(pixel_count() * kChannels, fill);
}

RgbImage RgbImage::from_data(int width, int height, std::vector<double> data) {
  RgbImage img;
  check_extent(width, height);
  img.width_ = width;
  img.height_ = height;
  if (data.size() != img.pixel_count() * kChannels) {
    throw Error(ErrorCode::DimensionMismatch, "image data has " + std::to_string(data.size()) +
                                                  " values, expected " +
                                                  std::to_string(img.pixel_count() * kChannels));
  }
  for (double v : data) {
    if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
      throw Error(ErrorCode::NonFinite, "image value outside [0, 1]: " + std::to_string(v));
    }
  }
  img.data_ = std::move(data);
  return img;
}

BinaryMask::BinaryMask(int width, int height, std::uint8_t fill) : width_(width), height_(height) {
  check_extent(width, height);
  if (fill > 1) throw Error(ErrorCode::InvalidArgument, "mask fill must be 0 or 1");
  values_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
}

BinaryMask BinaryMask::from_values(int width, int height, std::vector<std::uint8_t> values) {
  BinaryMask m;
  check_extent(width, height);
  m.width_ = width;
  m.height_ = height;
  if (values.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw Error(ErrorCode::DimensionMismatch, "mask data has " + std::to_string(values.size()) + " values");
  }
  if (std::any_of(values.begin(), values.end(), [](std::uint8_t v) { return v > 1; })) {
    throw Error(ErrorCode::InvalidArgument, "mask values must be 0 or 1");
  }
  m.values_ = std::move(values);
  return m;
}

std::size_t BinaryMask::hole_count() const noexcept {
  return static_cast<std::size_t>(std::count(values_.begin(), values_.end(), kHole));
}

BinaryMask BinaryMask::inverted() const {
  BinaryMask out = *this;
  for (auto& v : out.values_) v = static_cast<std::uint8_t>(1 - v);
  return out;
}

double hole_ratio(const BinaryMask& mask) noexcept {
  if (mask.pixel_count() == 0) return 0.0;
  return static_cast<double>(mask.hole_count()) / static_cast<double>(mask.pixel_count());
}

void require_same_size(int w0, int h0, int w1, int h1, std::string_view what) {
  if (w0 != w1 || h0 != h1) {
    throw Error(ErrorCode::DimensionMismatch, std::string(what) + ": " + std::to_string(w0) + "x" +
                                                  std::to_string(h0) + " vs " + std::to_string(w1) + "x" +
                                                  std::to_string(h1));
  }
}

}  // namespace qdi
