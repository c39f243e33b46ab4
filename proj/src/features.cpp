#include "qdinpaint/features.hpp"

#include <cmath>

#include "qdinpaint/descriptor_io.hpp"
#include "qdinpaint/error.hpp"
#include "qdinpaint/float_blob.hpp"

namespace qdi {

FeatureStack read_feature_stack(const std::filesystem::path& path) {
  const FloatBlob blob = read_float_blob(path);
  const auto layers = blob.header.find("layers");
  if (layers == blob.header.end() || !layers->is_array() || layers->empty()) {
    throw Error(ErrorCode::Io, path.string() + ": header needs a non-empty `layers` array");
  }
  FeatureStack stack;
  std::size_t pos = 0;
  for (const auto& l : *layers) {
    const auto c = header_field(l, "c");
    const auto h = header_field(l, "h");
    const auto w = header_field(l, "w");
    FeatureMap m(static_cast<int>(c), static_cast<int>(h), static_cast<int>(w));
    if (pos + m.data.size() > blob.values.size()) throw Error(ErrorCode::Io, path.string() + ": payload too short");
    for (std::size_t i = 0; i < m.data.size(); ++i) {
      const double v = blob.values[pos + i];
      if (!std::isfinite(v)) throw Error(ErrorCode::NonFinite, path.string() + ": non-finite feature value");
      m.data[i] = v;
    }
    pos += m.data.size();
    stack.push_back(std::move(m));
  }
  if (pos != blob.values.size()) throw Error(ErrorCode::Io, path.string() + ": trailing payload after last layer");
  return stack;
}

void write_feature_stack(const std::filesystem::path& path, const FeatureStack& stack) {
  nlohmann::json layers = nlohmann::json::array();
  std::vector<float> values;
  for (const FeatureMap& m : stack) {
    layers.push_back({{"c", m.channels}, {"h", m.height}, {"w", m.width}});
    for (double v : m.data) values.push_back(static_cast<float>(v));
  }
  write_float_blob(path, {{"layers", layers}}, values);
}

FeatureStack pooled_pyramid(const RgbImage& image, int levels) {
  FeatureStack stack;
  for (int level = 1; level <= levels; ++level) {
    const int f = 1 << level;
    const int h = image.height() / f;
    const int w = image.width() / f;
    if (h < 1 || w < 1) break;
    FeatureMap m(3, h, w);
    const double inv = 1.0 / (f * f);
    for (int c = 0; c < 3; ++c) {
      for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
          double s = 0.0;
          for (int dy = 0; dy < f; ++dy) {
            for (int dx = 0; dx < f; ++dx) s += image.at(x * f + dx, y * f + dy, c);
          }
          m.at(c, y, x) = s * inv;
        }
      }
    }
    stack.push_back(std::move(m));
  }
  if (stack.empty()) throw Error(ErrorCode::TooSmall, "image too small for pooled features");
  return stack;
}

}  // namespace qdi
