#include "qdinpaint/fmm.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <queue>
#include <string>

#include "qdinpaint/error.hpp"

namespace qdi {

namespace {

constexpr double kDirFloor = 1e-6;

enum class Flag : std::uint8_t { Known, Band, Inside };

struct HeapItem {
  double t;
  std::size_t index;
  // Min-heap on (t, index): ties resolve in row-major order.
  bool operator>(const HeapItem& o) const { return t > o.t || (t == o.t && index > o.index); }
};

using MinHeap = std::priority_queue<HeapItem, std::vector<HeapItem>, std::greater<>>;

// Generic narrow-band march over a grid: `t` and `flag` are seeded by the
// caller; Band pixels must already be in the heap.
class Marcher {
 public:
  Marcher(int width, int height, std::vector<double>& t, std::vector<Flag>& flag)
      : w_(width), h_(height), t_(t), flag_(flag) {}

  double solve(int x, int y) const {
    return eikonal_update(known_t(x - 1, y), known_t(x + 1, y), known_t(x, y - 1), known_t(x, y + 1));
  }

  bool has_known_neighbor(int x, int y) const {
    return known_t(x - 1, y) < kInfinity || known_t(x + 1, y) < kInfinity || known_t(x, y - 1) < kInfinity ||
           known_t(x, y + 1) < kInfinity;
  }

  void push(std::size_t idx, double t) {
    t_[idx] = t;
    flag_[idx] = Flag::Band;
    heap_.push({t, idx});
  }

  // Pops the next pixel to freeze; false once the band is empty or the
  // front exceeds `limit`.
  bool pop(std::size_t& idx, double limit = kInfinity) {
    while (!heap_.empty()) {
      const HeapItem top = heap_.top();
      if (flag_[top.index] == Flag::Known || top.t != t_[top.index]) {
        heap_.pop();
        continue;
      }
      if (top.t > limit) return false;
      heap_.pop();
      flag_[top.index] = Flag::Known;
      idx = top.index;
      return true;
    }
    return false;
  }

  // Re-solves the non-known 4-neighbors of a freshly frozen pixel.
  template <class Admit>
  void relax_neighbors(std::size_t idx, Admit admit) {
    const int x = static_cast<int>(idx % static_cast<std::size_t>(w_));
    const int y = static_cast<int>(idx / static_cast<std::size_t>(w_));
    static constexpr int kDx[4] = {-1, 1, 0, 0};
    static constexpr int kDy[4] = {0, 0, -1, 1};
    for (int k = 0; k < 4; ++k) {
      const int nx = x + kDx[k];
      const int ny = y + kDy[k];
      if (nx < 0 || ny < 0 || nx >= w_ || ny >= h_) continue;
      const std::size_t n = index(nx, ny);
      if (flag_[n] == Flag::Known || !admit(n)) continue;
      const double t = solve(nx, ny);
      if (t < t_[n]) push(n, t);
    }
  }

  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(w_) + static_cast<std::size_t>(x);
  }

 private:
  double known_t(int x, int y) const {
    if (x < 0 || y < 0 || x >= w_ || y >= h_) return kInfinity;
    const std::size_t i = index(x, y);
    return flag_[i] == Flag::Known ? t_[i] : kInfinity;
  }

  int w_;
  int h_;
  std::vector<double>& t_;
  std::vector<Flag>& flag_;
  MinHeap heap_;
};

// Seeds `region` pixels adjacent to the complement into the band.
void seed_band(Marcher& m, int w, int h, const std::vector<Flag>& flag) {
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t i = m.index(x, y);
      if (flag[i] == Flag::Inside && m.has_known_neighbor(x, y)) m.push(i, m.solve(x, y));
    }
  }
}

void require_valid_pixel(const BinaryMask& mask) {
  if (mask.pixel_count() > 0 && mask.hole_count() == mask.pixel_count()) {
    throw Error(ErrorCode::NoValidPixels, "mask has no valid pixels to inpaint from");
  }
}

struct Offset {
  int dx, dy;
  double inv_len;   // 1 / |p - q|
  double inv_len2;  // 1 / |p - q|^2
};

std::vector<Offset> disk_offsets(double radius) {
  std::vector<Offset> out;
  const int r = static_cast<int>(std::floor(radius));
  const double r2 = radius * radius;
  for (int dy = -r; dy <= r; ++dy) {
    for (int dx = -r; dx <= r; ++dx) {
      const int d2 = dx * dx + dy * dy;
      if (d2 == 0 || d2 > r2) continue;
      out.push_back({dx, dy, 1.0 / std::sqrt(static_cast<double>(d2)), 1.0 / d2});
    }
  }
  return out;
}

}  // namespace

double eikonal_update(double t_left, double t_right, double t_up, double t_down) {
  const double a = std::min(t_left, t_right);
  const double b = std::min(t_up, t_down);
  if (!(a < kInfinity) && !(b < kInfinity)) {
    throw Error(ErrorCode::AllInfinite, "eikonal update needs at least one finite neighbor");
  }
  if (a < kInfinity && b < kInfinity) {
    const double d = a - b;
    if (std::abs(d) < 1.0) return (a + b + std::sqrt(2.0 - d * d)) / 2.0;
  }
  return std::min(a, b) + 1.0;
}

std::vector<double> boundary_distance(const BinaryMask& mask) {
  require_valid_pixel(mask);
  const int w = mask.width();
  const int h = mask.height();
  std::vector<double> t(mask.pixel_count(), 0.0);
  std::vector<Flag> flag(mask.pixel_count(), Flag::Known);
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (mask.values()[i] == BinaryMask::kHole) {
      t[i] = kInfinity;
      flag[i] = Flag::Inside;
    }
  }
  Marcher m(w, h, t, flag);
  seed_band(m, w, h, flag);
  std::size_t idx;
  while (m.pop(idx)) m.relax_neighbors(idx, [](std::size_t) { return true; });
  return t;
}

RgbImage telea_inpaint(const RgbImage& image, const BinaryMask& mask, const TeleaOptions& options,
                       FmmTrace* trace) {
  require_same_size(image, mask, "telea_inpaint image vs mask");
  if (!(options.radius_px >= 1.0) || !std::isfinite(options.radius_px)) {
    throw Error(ErrorCode::InvalidArgument, "radius_px must be >= 1");
  }
  RgbImage out = image;
  if (mask.hole_count() == 0) return out;
  require_valid_pixel(mask);

  const int w = mask.width();
  const int h = mask.height();
  const std::size_t n = mask.pixel_count();
  const auto is_hole = [&](std::size_t i) { return mask.values()[i] == BinaryMask::kHole; };

  // Level on the known side: negated outward distance from the hole, limited
  // to the band any fill neighborhood can reach.
  std::vector<double> t(n, 0.0);
  if (!options.simple_level) {
    const double limit = 1.5 * options.radius_px + 2.0;
    std::vector<double> out_t(n, kInfinity);
    std::vector<Flag> out_flag(n, Flag::Inside);
    for (std::size_t i = 0; i < n; ++i) {
      if (is_hole(i)) {
        out_t[i] = 0.0;
        out_flag[i] = Flag::Known;
      }
    }
    Marcher outward(w, h, out_t, out_flag);
    seed_band(outward, w, h, out_flag);
    std::size_t idx;
    while (outward.pop(idx, limit)) outward.relax_neighbors(idx, [](std::size_t) { return true; });
    for (std::size_t i = 0; i < n; ++i) {
      if (!is_hole(i)) t[i] = -std::min(out_t[i], limit);
    }
  }

  std::vector<Flag> flag(n, Flag::Known);
  for (std::size_t i = 0; i < n; ++i) {
    if (is_hole(i)) {
      t[i] = kInfinity;
      flag[i] = Flag::Inside;
    }
  }

  Marcher march(w, h, t, flag);
  seed_band(march, w, h, flag);

  const std::vector<Offset> disk = disk_offsets(options.radius_px);
  // The pixel being filled is already frozen but still holds its hole value.
  std::size_t filling = n;
  auto known = [&](int x, int y) {
    if (x < 0 || y < 0 || x >= w || y >= h) return false;
    const std::size_t i = march.index(x, y);
    return i != filling && flag[i] == Flag::Known;
  };
  auto finite_t = [&](int x, int y, double& v) {
    if (x < 0 || y < 0 || x >= w || y >= h) return false;
    v = t[march.index(x, y)];
    return v < kInfinity;
  };

  // One-sided where only one neighbor qualifies, zero where none does.
  auto axis_diff = [](bool has_lo, double lo, bool has_hi, double hi, double center) {
    if (has_lo && has_hi) return (hi - lo) / 2.0;
    if (has_hi) return hi - center;
    if (has_lo) return center - lo;
    return 0.0;
  };

  [[maybe_unused]] double last_t = -kInfinity;
  std::size_t idx;
  while (march.pop(idx)) {
    const int px = static_cast<int>(idx % static_cast<std::size_t>(w));
    const int py = static_cast<int>(idx / static_cast<std::size_t>(w));
    const double tp = t[idx];
    filling = idx;
    assert(tp >= last_t);
    last_t = tp;
    if (trace) {
      trace->popped_t.push_back(tp);
      trace->fill_order.push_back(idx);
    }

    // Normal of the front: normalized gradient of T at p.
    double nx = 0.0;
    double ny = 0.0;
    {
      double lo = 0.0, hi = 0.0;
      const bool l = finite_t(px - 1, py, lo);
      const bool r = finite_t(px + 1, py, hi);
      nx = axis_diff(l, lo, r, hi, tp);
      const bool u = finite_t(px, py - 1, lo);
      const bool d = finite_t(px, py + 1, hi);
      ny = axis_diff(u, lo, d, hi, tp);
      const double len = std::hypot(nx, ny);
      if (len > 0.0) {
        nx /= len;
        ny /= len;
      }
    }

    double weight_sum = 0.0;
    double acc[3] = {0.0, 0.0, 0.0};
    double ref[3] = {0.0, 0.0, 0.0};
    bool have_ref = false;
    for (const Offset& o : disk) {
      const int qx = px - o.dx;
      const int qy = py - o.dy;
      if (!known(qx, qy)) continue;
      const std::size_t q = march.index(qx, qy);

      // (p - q) = (o.dx, o.dy)
      const double dir = std::max(kDirFloor, (o.dx * nx + o.dy * ny) * o.inv_len);
      const double lev = 1.0 / (1.0 + std::abs(tp - t[q]));
      const double weight = dir * o.inv_len2 * lev;

      const bool gl = known(qx - 1, qy);
      const bool gr = known(qx + 1, qy);
      const bool gu = known(qx, qy - 1);
      const bool gd = known(qx, qy + 1);
      for (int c = 0; c < 3; ++c) {
        const double iq = out.at(qx, qy, c);
        const double gx = axis_diff(gl, gl ? out.at(qx - 1, qy, c) : 0.0, gr, gr ? out.at(qx + 1, qy, c) : 0.0, iq);
        const double gy = axis_diff(gu, gu ? out.at(qx, qy - 1, c) : 0.0, gd, gd ? out.at(qx, qy + 1, c) : 0.0, iq);
        if (!have_ref) ref[c] = iq;
        // Deviations from a reference sample keep constant regions exact.
        acc[c] += weight * ((iq - ref[c]) + (gx * o.dx + gy * o.dy));
      }
      have_ref = true;
      weight_sum += weight;
    }
    // The popped pixel always touches a frozen neighbor inside the disk.
    assert(have_ref && weight_sum > 0.0);
    if (!have_ref) throw Error(ErrorCode::InvalidArgument, "empty neighborhood at pixel " + std::to_string(idx));

    for (int c = 0; c < 3; ++c) {
      out.at(px, py, c) = std::clamp(ref[c] + acc[c] / weight_sum, 0.0, 1.0);
    }

    march.relax_neighbors(idx, is_hole);
  }
  return out;
}

}  // namespace qdi
