#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "qdinpaint/image.hpp"

namespace qdi {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Unit-speed eikonal update from the four axis neighbors (+inf = unknown).
// With a = min(left, right), b = min(up, down): if both are finite and
// |a - b| < 1 the two-sided solution (a + b + sqrt(2 - (a - b)^2)) / 2,
// otherwise min(a, b) + 1. Throws AllInfinite when nothing is known.
double eikonal_update(double t_left, double t_right, double t_up, double t_down);

struct TeleaOptions {
  double radius_px = 5.0;
  // true: known pixels keep T = 0 instead of the outward distance.
  bool simple_level = false;
};

// Debug record of a run, in fill order.
struct FmmTrace {
  std::vector<double> popped_t;
  std::vector<std::size_t> fill_order;  // row-major pixel indices
};

// Distance from each hole pixel to the valid region by fast marching
// (0 on valid pixels). Throws NoValidPixels when the mask is all hole.
std::vector<double> boundary_distance(const BinaryMask& mask);

// Fills holes in non-decreasing distance order; each fill is the normalized
// weighted average of I(q) + grad I(q) . (p - q) over filled/valid q within
// radius, weighted by direction * 1/|p-q|^2 * 1/(1 + |T(p) - T(q)|).
// Valid pixels are copied through bit-exactly.
RgbImage telea_inpaint(const RgbImage& image, const BinaryMask& mask, const TeleaOptions& options = {},
                       FmmTrace* trace = nullptr);

}  // namespace qdi
