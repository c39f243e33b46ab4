#include "qdinpaint/raster.hpp"

#include <algorithm>
#include <cmath>

#include "qdinpaint/error.hpp"

namespace qdi {

std::size_t Canvas::marked_count() const noexcept {
  return static_cast<std::size_t>(std::count(cells_.begin(), cells_.end(), std::uint8_t{1}));
}

namespace {

// Integer endpoints keep the projection numerator and the cross product exact;
// the only rounding is in the final comparison against radius^2.
void stamp_segment(Canvas& canvas, Point a, Point b, double radius, double radius2) {
  const int reach = static_cast<int>(std::floor(radius));
  const int x_lo = std::max(0, std::min(a.x, b.x) - reach);
  const int x_hi = std::min(canvas.width() - 1, std::max(a.x, b.x) + reach);
  const int y_lo = std::max(0, std::min(a.y, b.y) - reach);
  const int y_hi = std::min(canvas.height() - 1, std::max(a.y, b.y) + reach);
  if (x_lo > x_hi || y_lo > y_hi) return;

  const std::int64_t dx = b.x - a.x;
  const std::int64_t dy = b.y - a.y;
  const std::int64_t len2 = dx * dx + dy * dy;

  for (int y = y_lo; y <= y_hi; ++y) {
    for (int x = x_lo; x <= x_hi; ++x) {
      const std::int64_t px = x - a.x;
      const std::int64_t py = y - a.y;
      const std::int64_t t = px * dx + py * dy;
      bool inside;
      if (len2 == 0 || t <= 0) {
        inside = static_cast<double>(px * px + py * py) <= radius2;
      } else if (t >= len2) {
        const std::int64_t qx = x - b.x;
        const std::int64_t qy = y - b.y;
        inside = static_cast<double>(qx * qx + qy * qy) <= radius2;
      } else {
        const std::int64_t cross = px * dy - py * dx;
        inside = static_cast<double>(cross * cross) / static_cast<double>(len2) <= radius2;
      }
      if (inside) canvas.mark(x, y);
    }
  }
}

}  // namespace

void rasterize_polyline(Canvas& canvas, std::span<const Point> points, double width_px) {
  if (!(width_px > 0.0) || !std::isfinite(width_px)) {
    throw Error(ErrorCode::InvalidArgument, "stroke width must be positive");
  }
  if (points.empty()) throw Error(ErrorCode::InvalidArgument, "polyline has no points");
  const double radius = width_px / 2.0;
  const double radius2 = radius * radius;
  if (points.size() == 1) {
    stamp_segment(canvas, points[0], points[0], radius, radius2);
    return;
  }
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    stamp_segment(canvas, points[i], points[i + 1], radius, radius2);
  }
}

}  // namespace qdi
