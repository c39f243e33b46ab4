// Regenerates the bundled sample corpus and test fixtures.
//   make_fixtures <repo root>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>

#include <json.hpp>

#include "qdinpaint/descriptor_io.hpp"
#include "qdinpaint/png_io.hpp"
#include "qdinpaint/retrieval.hpp"
#include "qdinpaint/rng.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using qdi::Rng;

namespace {

using Poly = std::vector<std::pair<int, int>>;

int clamp_px(double v) { return static_cast<int>(std::clamp(std::lround(v), 0l, 255l)); }

Poly line(Rng& rng) {
  const double x = rng.uniform(20, 235), y = rng.uniform(20, 235);
  const double a = rng.uniform(0, 2 * std::numbers::pi), len = rng.uniform(15, 90);
  Poly p{{clamp_px(x), clamp_px(y)}};
  const int n = 1 + static_cast<int>(rng.below(3));
  for (int i = 1; i <= n; ++i) {
    const double t = len * i / n;
    p.emplace_back(clamp_px(x + t * std::cos(a) + rng.uniform(-3, 3)), clamp_px(y + t * std::sin(a) + rng.uniform(-3, 3)));
  }
  return p;
}

Poly arc(Rng& rng, bool closed) {
  const double cx = rng.uniform(40, 215), cy = rng.uniform(40, 215);
  const double rx = rng.uniform(15, 90), ry = rng.uniform(15, 90);
  const double a0 = rng.uniform(0, 2 * std::numbers::pi);
  const double sweep = closed ? 2 * std::numbers::pi : rng.uniform(1.0, 4.0);
  const int n = 8 + static_cast<int>(rng.below(12));
  Poly p;
  for (int i = 0; i <= n; ++i) {
    const double a = a0 + sweep * i / n;
    p.emplace_back(clamp_px(cx + rx * std::cos(a)), clamp_px(cy + ry * std::sin(a)));
  }
  return p;
}

// Back-and-forth shading over a box, the densest thing people draw.
Poly scribble(Rng& rng) {
  const double w = rng.uniform(80, 230), h = rng.uniform(60, 200);
  const double x0 = rng.uniform(0, 255 - w), y0 = rng.uniform(0, 255 - h);
  const double step = rng.uniform(6, 16);
  const bool vertical = rng.below(2) == 1;
  Poly p;
  int k = 0;
  for (double s = 0; s <= (vertical ? w : h); s += step, ++k) {
    const double lo = rng.uniform(0, 0.1), hi = rng.uniform(0.9, 1.0);
    const double a = (k % 2 == 0) ? lo : hi, b = (k % 2 == 0) ? hi : lo;
    if (vertical) {
      p.emplace_back(clamp_px(x0 + s), clamp_px(y0 + a * h));
      p.emplace_back(clamp_px(x0 + s + step / 2), clamp_px(y0 + b * h));
    } else {
      p.emplace_back(clamp_px(x0 + a * w), clamp_px(y0 + s));
      p.emplace_back(clamp_px(x0 + b * w), clamp_px(y0 + s + step / 2));
    }
  }
  return p;
}

Poly dot(Rng& rng) { return {{clamp_px(rng.uniform(10, 245)), clamp_px(rng.uniform(10, 245))}}; }

json stroke_json(const Poly& p) {
  json xs = json::array(), ys = json::array();
  for (auto [x, y] : p) {
    xs.push_back(x);
    ys.push_back(y);
  }
  return json::array({xs, ys});
}

void write_corpus(const fs::path& path, std::size_t drawings, std::uint64_t seed) {
  static const char* kWords[] = {"cat", "house", "tree", "cloud", "bicycle", "face", "fish", "star"};
  Rng rng(seed);
  std::ofstream out(path);
  for (std::size_t d = 0; d < drawings; ++d) {
    json strokes = json::array();
    const int n = 1 + static_cast<int>(rng.below(6));
    for (int s = 0; s < n; ++s) {
      const double u = rng.uniform01();
      if (u < 0.40) strokes.push_back(stroke_json(line(rng)));
      else if (u < 0.68) strokes.push_back(stroke_json(arc(rng, false)));
      else if (u < 0.83) strokes.push_back(stroke_json(arc(rng, true)));
      else if (u < 0.95) strokes.push_back(stroke_json(scribble(rng)));
      else strokes.push_back(stroke_json(dot(rng)));
    }
    const json rec{{"word", kWords[rng.below(8)]},
                   {"countrycode", "ZZ"},
                   {"recognized", true},
                   {"key_id", std::to_string(5000000000000000ull + d * 7919)},
                   {"drawing", strokes}};
    out << rec.dump() << '\n';
  }
}

qdi::RgbImage synthetic_image(int side, int kind) {
  qdi::RgbImage img(side, side);
  const double f = 1.0 + kind;
  for (int y = 0; y < side; ++y) {
    for (int x = 0; x < side; ++x) {
      const double u = static_cast<double>(x) / (side - 1), v = static_cast<double>(y) / (side - 1);
      const double r = 0.5 + 0.5 * std::sin(f * 2.1 * u + 0.7 * kind);
      const double g = 0.5 + 0.5 * std::cos(f * 1.3 * v - 0.4 * kind);
      const double dx = u - 0.5 - 0.05 * kind, dy = v - 0.5;
      const double b = (dx * dx + dy * dy < 0.04 + 0.01 * kind) ? 0.9 : 0.15 + 0.08 * kind;
      img.at(x, y, 0) = std::round(r * 255) / 255;
      img.at(x, y, 1) = std::round(g * 255) / 255;
      img.at(x, y, 2) = std::round(b * 255) / 255;
    }
  }
  return img;
}

void write_e2e(const fs::path& dir) {
  fs::create_directories(dir / "images");
  qdi::ThumbnailExtractor thumb;
  qdi::DescriptorTable table;
  table.dim = thumb.dim();
  for (int i = 0; i < 8; ++i) {
    const std::string id = "img_" + std::to_string(i);
    const qdi::RgbImage img = synthetic_image(128, i);
    qdi::write_image(dir / "images" / (id + ".png"), img);
    table.ids.push_back(id);
    for (double v : thumb.extract(img)) table.values.push_back(static_cast<float>(v));
  }
  qdi::write_descriptor_table(dir / "index.bin", dir / "ids.json", table);
  write_corpus(dir / "corpus.ndjson", 40, 11);
}

// Six 32x32 pairs, one per bucket; the mask holes are the first n pixels in
// row-major order.
void write_evaluate(const fs::path& dir) {
  constexpr int kSide = 32;
  const int holes[] = {51, 154, 256, 358, 461, 563};
  fs::create_directories(dir);
  json pairs = json::array();
  for (int i = 0; i < 6; ++i) {
    qdi::BinaryMask mask(kSide, kSide);
    for (int p = 0; p < holes[i]; ++p) mask.set(p % kSide, p / kSide, qdi::BinaryMask::kHole);
    const qdi::RgbImage gt = synthetic_image(kSide, i);
    qdi::RgbImage out = gt;
    for (int y = 0; y < kSide; ++y) {
      for (int x = 0; x < kSide; ++x) {
        if (!mask.is_hole(x, y)) continue;
        for (int c = 0; c < 3; ++c) out.at(x, y, c) = std::round(0.5 * (gt.at(x, y, c) + 0.5) * 255) / 255;
      }
    }
    const std::string id = "pair_" + std::to_string(i);
    qdi::write_image(dir / (id + "_gt.png"), gt);
    qdi::write_image(dir / (id + "_out.png"), out);
    qdi::write_mask(dir / (id + "_mask.png"), mask);
    pairs.push_back({{"id", id}, {"out", id + "_out.png"}, {"gt", id + "_gt.png"}, {"mask", id + "_mask.png"}});
  }
  std::ofstream(dir / "pairs.json") << json{{"pairs", pairs}}.dump(2) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: make_fixtures <repo root>\n";
    return 1;
  }
  const fs::path root = argv[1];
  try {
    fs::create_directories(root / "data");
    write_corpus(root / "data" / "quickdraw_sample.ndjson", 400, 2019);
    write_e2e(root / "tests" / "fixtures" / "e2e");
    write_evaluate(root / "tests" / "fixtures" / "evaluate");
  } catch (const std::exception& e) {
    std::cerr << "make_fixtures: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
