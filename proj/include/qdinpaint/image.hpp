#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace qdi {

// H x W x 3 image with interleaved channels, values in [0, 1].
class RgbImage {
 public:
  static constexpr int kChannels = 3;

  RgbImage() = default;
  RgbImage(int width, int height, double fill = 0.0);

  // Validates size, finiteness and the [0, 1] range.
  static RgbImage from_data(int width, int height, std::vector<double> data);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t pixel_count() const noexcept {
    return static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_);
  }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  std::size_t offset(int x, int y, int c = 0) const noexcept {
    return (static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x)) *
               kChannels +
           static_cast<std::size_t>(c);
  }
  double& at(int x, int y, int c) noexcept { return data_[offset(x, y, c)]; }
  double at(int x, int y, int c) const noexcept { return data_[offset(x, y, c)]; }

  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }

  bool operator==(const RgbImage&) const = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<double> data_;
};

// Per-pixel validity map: 1 = valid, 0 = hole.
class BinaryMask {
 public:
  static constexpr std::uint8_t kHole = 0;
  static constexpr std::uint8_t kValid = 1;

  BinaryMask() = default;
  BinaryMask(int width, int height, std::uint8_t fill = kValid);

  // Values must all be 0 or 1.
  static BinaryMask from_values(int width, int height, std::vector<std::uint8_t> values);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t pixel_count() const noexcept { return values_.size(); }

  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
  }
  std::uint8_t at(int x, int y) const noexcept { return values_[index(x, y)]; }
  void set(int x, int y, std::uint8_t v) noexcept { values_[index(x, y)] = v; }
  bool is_hole(int x, int y) const noexcept { return values_[index(x, y)] == kHole; }

  std::span<const std::uint8_t> values() const noexcept { return values_; }

  std::size_t hole_count() const noexcept;
  BinaryMask inverted() const;

  bool operator==(const BinaryMask&) const = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> values_;
};

// Fraction of hole pixels; 0 for an empty mask.
double hole_ratio(const BinaryMask& mask) noexcept;

// Throws DimensionMismatch naming `what` when the extents differ.
void require_same_size(int w0, int h0, int w1, int h1, std::string_view what);

inline void require_same_size(const RgbImage& a, const RgbImage& b, std::string_view what) {
  require_same_size(a.width(), a.height(), b.width(), b.height(), what);
}
inline void require_same_size(const RgbImage& a, const BinaryMask& m, std::string_view what) {
  require_same_size(a.width(), a.height(), m.width(), m.height(), what);
}

}  // namespace qdi
