#include "qdinpaint/losses.hpp"

#include <algorithm>
#include <cmath>

#include "qdinpaint/error.hpp"
#include "qdinpaint/simd/kernels.hpp"

namespace qdi {

namespace {

void require_aligned(const FeatureStack& a, const FeatureStack& b) {
  if (a.empty() || a.size() != b.size()) {
    throw Error(ErrorCode::ShapeMismatch, "feature stacks have " + std::to_string(a.size()) + " and " +
                                              std::to_string(b.size()) + " layers");
  }
  for (std::size_t l = 0; l < a.size(); ++l) {
    if (!a[l].same_shape(b[l])) throw Error(ErrorCode::ShapeMismatch, "layer " + std::to_string(l) + " shapes differ");
  }
}

double mean_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.empty()) return 0.0;
  return simd::active().sum_abs_diff(a.data(), b.data(), a.size()) / static_cast<double>(a.size());
}

}  // namespace

nlohmann::json LossTerms::to_json() const {
  return {{"l_valid", l_valid},         {"l_hole", l_hole},          {"l_tv", l_tv},
          {"l_perc_out", l_perc_out},   {"l_perc_comp", l_perc_comp}, {"l_style_out", l_style_out},
          {"l_style_comp", l_style_comp}};
}

std::size_t RegionMask::count() const noexcept {
  return static_cast<std::size_t>(std::count(inside.begin(), inside.end(), std::uint8_t{1}));
}

RgbImage compose(const RgbImage& out, const RgbImage& gt, const BinaryMask& mask) {
  require_same_size(out, gt, "compose output vs ground truth");
  require_same_size(out, mask, "compose image vs mask");
  RgbImage comp = out;
  for (int y = 0; y < out.height(); ++y) {
    for (int x = 0; x < out.width(); ++x) {
      if (mask.is_hole(x, y)) continue;
      for (int c = 0; c < 3; ++c) comp.at(x, y, c) = gt.at(x, y, c);
    }
  }
  return comp;
}

double masked_l1(const RgbImage& out, const RgbImage& gt, const BinaryMask& mask, Region region) {
  require_same_size(out, gt, "masked_l1 output vs ground truth");
  require_same_size(out, mask, "masked_l1 image vs mask");
  if (out.empty()) return 0.0;
  std::vector<double> gate(out.size());
  const auto m = mask.values();
  for (std::size_t i = 0; i < m.size(); ++i) {
    const double g = region == Region::Hole ? 1.0 - m[i] : static_cast<double>(m[i]);
    gate[3 * i] = gate[3 * i + 1] = gate[3 * i + 2] = g;
  }
  const double sum = simd::active().sum_abs_diff_gated(out.data().data(), gt.data().data(), gate.data(), gate.size());
  return sum / static_cast<double>(out.size());
}

std::vector<double> gram(const FeatureMap& f) {
  const std::size_t c = static_cast<std::size_t>(f.channels);
  const std::size_t n = f.plane();
  std::vector<double> g(c * c, 0.0);
  if (c == 0 || n == 0) return g;
  const double norm = 1.0 / static_cast<double>(c * n);
  const auto& k = simd::active();
  for (std::size_t i = 0; i < c; ++i) {
    for (std::size_t j = i; j < c; ++j) {
      const double v = k.dot_f64(f.data.data() + i * n, f.data.data() + j * n, n) * norm;
      g[i * c + j] = v;
      g[j * c + i] = v;
    }
  }
  return g;
}

double perceptual_loss(const FeatureStack& a, const FeatureStack& b) {
  require_aligned(a, b);
  double total = 0.0;
  for (std::size_t l = 0; l < a.size(); ++l) total += mean_abs_diff(a[l].data, b[l].data);
  return total;
}

double style_loss(const FeatureStack& a, const FeatureStack& b) {
  require_aligned(a, b);
  double total = 0.0;
  for (std::size_t l = 0; l < a.size(); ++l) total += mean_abs_diff(gram(a[l]), gram(b[l]));
  return total;
}

RegionMask dilated_hole_region(const BinaryMask& mask) {
  RegionMask r{mask.width(), mask.height(), std::vector<std::uint8_t>(mask.pixel_count(), 0)};
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      if (!mask.is_hole(x, y)) continue;
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          const int nx = x + dx;
          const int ny = y + dy;
          if (nx < 0 || ny < 0 || nx >= mask.width() || ny >= mask.height()) continue;
          r.inside[mask.index(nx, ny)] = 1;
        }
      }
    }
  }
  return r;
}

double tv_loss(const RgbImage& comp, const RegionMask& region) {
  require_same_size(comp.width(), comp.height(), region.width, region.height, "tv_loss image vs region");
  double sum = 0.0;
  std::size_t terms = 0;
  for (int y = 0; y < comp.height(); ++y) {
    for (int x = 0; x < comp.width(); ++x) {
      if (!region.at(x, y)) continue;
      const bool right = x + 1 < comp.width() && region.at(x + 1, y);
      const bool down = y + 1 < comp.height() && region.at(x, y + 1);
      for (int c = 0; c < 3; ++c) {
        if (right) sum += std::abs(comp.at(x + 1, y, c) - comp.at(x, y, c));
        if (down) sum += std::abs(comp.at(x, y + 1, c) - comp.at(x, y, c));
      }
      terms += 3 * (static_cast<std::size_t>(right) + static_cast<std::size_t>(down));
    }
  }
  return terms == 0 ? 0.0 : sum / static_cast<double>(terms);
}

double total_loss(const LossTerms& t) {
  for (double v : {t.l_valid, t.l_hole, t.l_tv, t.l_perc_out, t.l_perc_comp, t.l_style_out, t.l_style_comp}) {
    if (!std::isfinite(v)) throw Error(ErrorCode::NonFinite, "loss term is not finite");
  }
  return LossWeights::kValid * t.l_valid + LossWeights::kHole * t.l_hole + LossWeights::kTv * t.l_tv +
         LossWeights::kPerceptual * (t.l_perc_out + t.l_perc_comp) +
         LossWeights::kStyle * (t.l_style_out + t.l_style_comp);
}

LossTerms compute_loss_terms(const RgbImage& out, const RgbImage& gt, const BinaryMask& mask,
                             const FeatureStack& feat_out, const FeatureStack& feat_comp,
                             const FeatureStack& feat_gt) {
  LossTerms t;
  t.l_valid = masked_l1(out, gt, mask, Region::Valid);
  t.l_hole = masked_l1(out, gt, mask, Region::Hole);
  t.l_tv = tv_loss(compose(out, gt, mask), dilated_hole_region(mask));
  t.l_perc_out = perceptual_loss(feat_out, feat_gt);
  t.l_perc_comp = perceptual_loss(feat_comp, feat_gt);
  t.l_style_out = style_loss(feat_out, feat_gt);
  t.l_style_comp = style_loss(feat_comp, feat_gt);
  return t;
}

}  // namespace qdi
