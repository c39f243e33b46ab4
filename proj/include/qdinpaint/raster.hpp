#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qdinpaint/corpus.hpp"

namespace qdi {

// Binary drawing surface; pixel (x, y) has its center at integer coordinates (x, y).
class Canvas {
 public:
  Canvas() = default;
  Canvas(int width, int height) : width_(width), height_(height), cells_(static_cast<std::size_t>(width) * height, 0) {}

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  bool at(int x, int y) const noexcept { return cells_[index(x, y)] != 0; }
  void mark(int x, int y) noexcept { cells_[index(x, y)] = 1; }
  std::span<const std::uint8_t> cells() const noexcept { return cells_; }
  std::size_t marked_count() const noexcept;

  bool operator==(const Canvas&) const = default;

 private:
  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> cells_;
};

// Marks every pixel whose center is within width_px / 2 of the polyline
// (round caps and joins). A lone point stamps a disk. Idempotent.
void rasterize_polyline(Canvas& canvas, std::span<const Point> points, double width_px);

}  // namespace qdi
