#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "qdinpaint/descriptor_io.hpp"
#include "qdinpaint/image.hpp"

namespace qdi {

struct Hit {
  std::string id;
  double similarity = 0.0;
  bool operator==(const Hit&) const = default;
};

// Immutable id -> descriptor table with cached Euclidean norms.
class DescriptorIndex {
 public:
  using Entry = std::pair<std::string, std::vector<double>>;

  DescriptorIndex() = default;

  // Throws DuplicateId, DimensionMismatch, ZeroVector, NonFinite.
  static DescriptorIndex build(std::vector<Entry> entries);
  static DescriptorIndex from_table(const DescriptorTable& table);

  std::size_t size() const noexcept { return ids_.size(); }
  std::size_t dim() const noexcept { return dim_; }
  const std::vector<std::string>& ids() const noexcept { return ids_; }
  std::span<const double> row(std::size_t i) const noexcept { return {vectors_.data() + i * dim_, dim_}; }
  double norm(std::size_t i) const noexcept { return norms_[i]; }
  std::optional<std::size_t> find(const std::string& id) const;

 private:
  std::vector<std::string> ids_;
  std::vector<double> vectors_;
  std::vector<double> norms_;
  std::unordered_map<std::string, std::size_t> rows_;
  std::size_t dim_ = 0;
};

// Exhaustive cosine kNN: min(k, N - |exclude|) hits, similarity descending,
// ties by ascending id.
std::vector<Hit> cosine_topk(const DescriptorIndex& index, std::span<const double> query, std::size_t k,
                             const std::unordered_set<std::string>& exclude = {});

// Top-k non-self neighbors for every stored id. Needs N >= 2.
std::map<std::string, std::vector<std::string>> precompute_similars(const DescriptorIndex& index, std::size_t k,
                                                                    unsigned threads = 1);

class FeatureExtractor {
 public:
  virtual ~FeatureExtractor() = default;
  virtual std::size_t dim() const = 0;
  virtual std::vector<double> extract(const RgbImage& image) const = 0;
};

// 8x8 area-averaged luma thumbnail, flattened row-major (dim 64).
class ThumbnailExtractor final : public FeatureExtractor {
 public:
  static constexpr int kSide = 8;
  std::size_t dim() const override { return kSide * kSide; }
  std::vector<double> extract(const RgbImage& image) const override;
};

// Precomputed descriptors keyed by the 8-bit content of registered images.
class LookupExtractor final : public FeatureExtractor {
 public:
  explicit LookupExtractor(std::size_t dim) : dim_(dim) {}

  void add(const RgbImage& image, std::vector<double> descriptor);
  std::size_t dim() const override { return dim_; }
  // Throws UnknownImage for an unregistered image.
  std::vector<double> extract(const RgbImage& image) const override;

  static std::uint64_t content_key(const RgbImage& image);

 private:
  std::size_t dim_;
  std::unordered_map<std::uint64_t, std::vector<double>> table_;
};

using Inpainter = std::function<RgbImage(const RgbImage&, const BinaryMask&)>;

struct TwoStepResult {
  RgbImage coarse;
  std::vector<Hit> hits;
};

// Coarse-inpaint the masked query, describe it, then exact cosine kNN.
TwoStepResult two_step_retrieve(const RgbImage& masked, const BinaryMask& mask, const Inpainter& coarse,
                                const FeatureExtractor& extractor, const DescriptorIndex& index, std::size_t k);

// C x H x W planar stack: 3 masked-image channels (holes zeroed), the mask,
// then 3 channels per similar image.
struct TensorStack {
  int channels = 0;
  int height = 0;
  int width = 0;
  std::vector<double> data;

  double at(int c, int y, int x) const {
    return data[(static_cast<std::size_t>(c) * height + static_cast<std::size_t>(y)) * width +
                static_cast<std::size_t>(x)];
  }
};

TensorStack assemble_network_input(const RgbImage& masked, const BinaryMask& mask, std::span<const RgbImage> sims);

struct StackParts {
  RgbImage masked;
  BinaryMask mask;
  std::vector<RgbImage> sims;
};

// Inverse of assemble_network_input.
StackParts slice_network_input(const TensorStack& stack);

}  // namespace qdi
