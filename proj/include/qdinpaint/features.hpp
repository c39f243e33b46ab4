#pragma once

#include <filesystem>
#include <vector>

#include "qdinpaint/image.hpp"

namespace qdi {

struct FeatureMap {
  int channels = 0;
  int height = 0;
  int width = 0;
  std::vector<double> data;  // C x H x W

  FeatureMap() = default;
  FeatureMap(int c, int h, int w, double fill = 0.0)
      : channels(c), height(h), width(w), data(static_cast<std::size_t>(c) * h * w, fill) {}

  std::size_t plane() const noexcept { return static_cast<std::size_t>(height) * static_cast<std::size_t>(width); }
  double& at(int c, int y, int x) noexcept { return data[static_cast<std::size_t>(c) * plane() + static_cast<std::size_t>(y) * width + x]; }
  double at(int c, int y, int x) const noexcept { return data[static_cast<std::size_t>(c) * plane() + static_cast<std::size_t>(y) * width + x]; }
  bool same_shape(const FeatureMap& o) const noexcept {
    return channels == o.channels && height == o.height && width == o.width;
  }
};

using FeatureStack = std::vector<FeatureMap>;

// `{"layers":[{"c":C,"h":H,"w":W},...]}` + concatenated float32 layers.
FeatureStack read_feature_stack(const std::filesystem::path& path);
void write_feature_stack(const std::filesystem::path& path, const FeatureStack& stack);

// Stand-in feature provider when no network features are supplied: the RGB
// image average-pooled by 2, 4 and 8 (three 3-channel layers).
FeatureStack pooled_pyramid(const RgbImage& image, int levels = 3);

}  // namespace qdi
