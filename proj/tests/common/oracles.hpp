#pragma once

// Naive reference implementations the library is checked against. They
// share no code with src/ beyond the data types.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "qdinpaint/corpus.hpp"
#include "qdinpaint/features.hpp"
#include "qdinpaint/image.hpp"
#include "qdinpaint/retrieval.hpp"

namespace oracle {

inline std::filesystem::path fixture_dir() { return QDI_FIXTURE_DIR; }
inline std::filesystem::path data_dir() { return QDI_DATA_DIR; }

inline std::filesystem::path scratch_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("qdinpaint_test_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

// --- random inputs -------------------------------------------------------

inline qdi::RgbImage random_image(std::mt19937_64& g, int w, int h) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  qdi::RgbImage img(w, h);
  for (double& v : img.data()) v = u(g);
  return img;
}

inline qdi::BinaryMask random_mask(std::mt19937_64& g, int w, int h, double hole_p) {
  std::bernoulli_distribution hole(hole_p);
  qdi::BinaryMask m(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      if (hole(g)) m.set(x, y, qdi::BinaryMask::kHole);
  return m;
}

inline qdi::FeatureStack random_stack(std::mt19937_64& g, const std::vector<std::array<int, 3>>& shapes) {
  std::normal_distribution<double> n(0.0, 1.0);
  qdi::FeatureStack s;
  for (auto [c, h, w] : shapes) {
    qdi::FeatureMap f(c, h, w);
    for (double& v : f.data) v = n(g);
    s.push_back(std::move(f));
  }
  return s;
}

// --- rasterization -------------------------------------------------------

inline double point_segment_distance(double px, double py, double ax, double ay, double bx, double by) {
  const double dx = bx - ax, dy = by - ay;
  const double len2 = dx * dx + dy * dy;
  double t = 0.0;
  if (len2 > 0) t = std::clamp(((px - ax) * dx + (py - ay) * dy) / len2, 0.0, 1.0);
  const double cx = ax + t * dx - px, cy = ay + t * dy - py;
  return std::sqrt(cx * cx + cy * cy);
}

inline std::vector<std::uint8_t> brute_force_raster(int w, int h, const std::vector<qdi::Point>& pts, double width) {
  std::vector<std::uint8_t> out(static_cast<std::size_t>(w) * h, 0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double best = 1e300;
      if (pts.size() == 1) best = std::hypot(x - pts[0].x, y - pts[0].y);
      for (std::size_t i = 0; i + 1 < pts.size(); ++i)
        best = std::min(best, point_segment_distance(x, y, pts[i].x, pts[i].y, pts[i + 1].x, pts[i + 1].y));
      out[static_cast<std::size_t>(y) * w + x] = best <= width / 2 ? 1 : 0;
    }
  }
  return out;
}

// --- losses --------------------------------------------------------------

inline double naive_masked_l1(const qdi::RgbImage& out, const qdi::RgbImage& gt, const qdi::BinaryMask& m, bool hole) {
  double s = 0;
  for (int y = 0; y < out.height(); ++y)
    for (int x = 0; x < out.width(); ++x) {
      const double gate = hole ? 1.0 - m.at(x, y) : m.at(x, y);
      for (int c = 0; c < 3; ++c) s += std::abs(gate * (out.at(x, y, c) - gt.at(x, y, c)));
    }
  return s / (3.0 * out.width() * out.height());
}

inline std::vector<double> naive_gram(const qdi::FeatureMap& f) {
  const int c = f.channels;
  std::vector<double> g(static_cast<std::size_t>(c) * c, 0.0);
  for (int i = 0; i < c; ++i)
    for (int j = 0; j < c; ++j) {
      double s = 0;
      for (int y = 0; y < f.height; ++y)
        for (int x = 0; x < f.width; ++x) s += f.at(i, y, x) * f.at(j, y, x);
      g[static_cast<std::size_t>(i) * c + j] = s / (static_cast<double>(c) * f.height * f.width);
    }
  return g;
}

inline double naive_perceptual(const qdi::FeatureStack& a, const qdi::FeatureStack& b) {
  double total = 0;
  for (std::size_t l = 0; l < a.size(); ++l) {
    double s = 0;
    for (std::size_t i = 0; i < a[l].data.size(); ++i) s += std::abs(a[l].data[i] - b[l].data[i]);
    total += s / static_cast<double>(a[l].data.size());
  }
  return total;
}

inline double naive_style(const qdi::FeatureStack& a, const qdi::FeatureStack& b) {
  double total = 0;
  for (std::size_t l = 0; l < a.size(); ++l) {
    const auto ga = naive_gram(a[l]), gb = naive_gram(b[l]);
    double s = 0;
    for (std::size_t i = 0; i < ga.size(); ++i) s += std::abs(ga[i] - gb[i]);
    total += s / static_cast<double>(ga.size());
  }
  return total;
}

inline qdi::RgbImage naive_compose(const qdi::RgbImage& out, const qdi::RgbImage& gt, const qdi::BinaryMask& m) {
  qdi::RgbImage r(out.width(), out.height());
  for (int y = 0; y < out.height(); ++y)
    for (int x = 0; x < out.width(); ++x)
      for (int c = 0; c < 3; ++c) {
        const double mv = m.at(x, y);
        r.at(x, y, c) = mv * gt.at(x, y, c) + (1 - mv) * out.at(x, y, c);
      }
  return r;
}

// 8-dilated hole region, then the mean of every in-region neighbor difference.
inline double naive_tv(const qdi::RgbImage& img, const qdi::BinaryMask& m) {
  const int w = img.width(), h = img.height();
  auto in = [&](int x, int y) {
    for (int dy = -1; dy <= 1; ++dy)
      for (int dx = -1; dx <= 1; ++dx) {
        const int nx = x + dx, ny = y + dy;
        if (nx >= 0 && ny >= 0 && nx < w && ny < h && m.is_hole(nx, ny)) return true;
      }
    return false;
  };
  double s = 0;
  int n = 0;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      for (int c = 0; c < 3; ++c) {
        if (x + 1 < w && in(x, y) && in(x + 1, y)) {
          s += std::abs(img.at(x + 1, y, c) - img.at(x, y, c));
          ++n;
        }
        if (y + 1 < h && in(x, y) && in(x, y + 1)) {
          s += std::abs(img.at(x, y + 1, c) - img.at(x, y, c));
          ++n;
        }
      }
  return n == 0 ? 0.0 : s / n;
}

// --- metrics -------------------------------------------------------------

inline double naive_ssim(const qdi::RgbImage& a, const qdi::RgbImage& b) {
  const int w = a.width(), h = a.height(), win = 11;
  auto luma = [](const qdi::RgbImage& im, int x, int y) {
    return 0.299 * im.at(x, y, 0) + 0.587 * im.at(x, y, 1) + 0.114 * im.at(x, y, 2);
  };
  double kern[11][11], ksum = 0;
  for (int i = 0; i < win; ++i)
    for (int j = 0; j < win; ++j) {
      kern[i][j] = std::exp(-((i - 5) * (i - 5) + (j - 5) * (j - 5)) / (2 * 1.5 * 1.5));
      ksum += kern[i][j];
    }
  const double c1 = 0.01 * 0.01, c2 = 0.03 * 0.03;
  double total = 0;
  int count = 0;
  for (int y0 = 0; y0 + win <= h; ++y0)
    for (int x0 = 0; x0 + win <= w; ++x0) {
      double ma = 0, mb = 0;
      for (int i = 0; i < win; ++i)
        for (int j = 0; j < win; ++j) {
          const double k = kern[i][j] / ksum;
          ma += k * luma(a, x0 + j, y0 + i);
          mb += k * luma(b, x0 + j, y0 + i);
        }
      double va = 0, vb = 0, cov = 0;
      for (int i = 0; i < win; ++i)
        for (int j = 0; j < win; ++j) {
          const double k = kern[i][j] / ksum;
          const double da = luma(a, x0 + j, y0 + i) - ma, db = luma(b, x0 + j, y0 + i) - mb;
          va += k * da * da;
          vb += k * db * db;
          cov += k * da * db;
        }
      total += ((2 * ma * mb + c1) * (2 * cov + c2)) / ((ma * ma + mb * mb + c1) * (va + vb + c2));
      ++count;
    }
  return total / count;
}

inline double naive_inception(const std::vector<std::vector<double>>& rows) {
  const std::size_t n = rows.size(), c = rows[0].size();
  std::vector<double> mean(c, 0.0);
  for (const auto& r : rows)
    for (std::size_t j = 0; j < c; ++j) mean[j] += r[j] / n;
  double kl = 0;
  for (const auto& r : rows)
    for (std::size_t j = 0; j < c; ++j)
      if (r[j] > 0) kl += r[j] * std::log(r[j] / mean[j]);
  return std::exp(kl / n);
}

// --- retrieval -----------------------------------------------------------

inline std::vector<qdi::Hit> brute_topk(const std::vector<std::string>& ids, const std::vector<std::vector<double>>& vecs,
                                        const std::vector<double>& q, std::size_t k, const std::string& exclude = "") {
  std::vector<qdi::Hit> all;
  double qn = 0;
  for (double v : q) qn += v * v;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (ids[i] == exclude) continue;
    double dot = 0, vn = 0;
    for (std::size_t d = 0; d < q.size(); ++d) {
      dot += q[d] * vecs[i][d];
      vn += vecs[i][d] * vecs[i][d];
    }
    all.push_back({ids[i], dot / std::sqrt(qn * vn)});
  }
  std::sort(all.begin(), all.end(), [](const qdi::Hit& a, const qdi::Hit& b) {
    return a.similarity != b.similarity ? a.similarity > b.similarity : a.id < b.id;
  });
  if (all.size() > k) all.resize(k);
  return all;
}

inline bool rel_close(double a, double b, double rel) {
  return a == b || std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b));
}

}  // namespace oracle
