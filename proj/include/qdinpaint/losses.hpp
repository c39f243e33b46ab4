#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "qdinpaint/features.hpp"
#include "qdinpaint/image.hpp"

namespace qdi {

struct LossWeights {
  static constexpr double kValid = 1.0;
  static constexpr double kHole = 6.0;
  static constexpr double kTv = 0.1;
  static constexpr double kPerceptual = 0.05;
  static constexpr double kStyle = 120.0;
};

struct LossTerms {
  double l_valid = 0.0;
  double l_hole = 0.0;
  double l_tv = 0.0;
  double l_perc_out = 0.0;
  double l_perc_comp = 0.0;
  double l_style_out = 0.0;
  double l_style_comp = 0.0;

  nlohmann::json to_json() const;
};

// Pixels a loss sums over.
struct RegionMask {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> inside;

  bool at(int x, int y) const noexcept {
    return inside[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x)] != 0;
  }
  std::size_t count() const noexcept;
};

enum class Region { Hole, Valid };

// I_comp = M * I_gt + (1 - M) * I_out.
RgbImage compose(const RgbImage& out, const RgbImage& gt, const BinaryMask& mask);

// Mean over all H*W*3 elements of |G * (out - gt)|, G = 1 - M (hole) or M (valid).
double masked_l1(const RgbImage& out, const RgbImage& gt, const BinaryMask& mask, Region region);

// G = F F^T / (C H W), F the C x (H W) flattening.
std::vector<double> gram(const FeatureMap& f);

// Sum over layers of the element mean |a_l - b_l|.
double perceptual_loss(const FeatureStack& a, const FeatureStack& b);

// Sum over layers of the element mean |gram(a_l) - gram(b_l)|.
double style_loss(const FeatureStack& a, const FeatureStack& b);

// Hole pixels plus their 8-neighbors.
RegionMask dilated_hole_region(const BinaryMask& mask);

// Mean of the absolute horizontal and vertical neighbor differences whose
// two endpoints both lie in `region`, over all channels; 0 if none qualify.
double tv_loss(const RgbImage& comp, const RegionMask& region);

// L_valid + 6 L_hole + 0.1 L_tv + 0.05 (perc_out + perc_comp) + 120 (style_out + style_comp).
double total_loss(const LossTerms& t);

// All seven terms. Feature stacks are for I_out, I_comp and I_gt.
LossTerms compute_loss_terms(const RgbImage& out, const RgbImage& gt, const BinaryMask& mask,
                             const FeatureStack& feat_out, const FeatureStack& feat_comp,
                             const FeatureStack& feat_gt);

}  // namespace qdi
