#include "qdinpaint/retrieval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qdinpaint/error.hpp"
#include "qdinpaint/parallel.hpp"
#include "qdinpaint/simd/kernels.hpp"

namespace qdi {

namespace {

void check_finite(std::span<const double> v, const std::string& what) {
  for (double x : v) {
    if (!std::isfinite(x)) throw Error(ErrorCode::NonFinite, what + " has a non-finite entry");
  }
}

bool ranks_before(const Hit& a, const Hit& b) {
  if (a.similarity != b.similarity) return a.similarity > b.similarity;
  return a.id < b.id;
}

}  // namespace

DescriptorIndex DescriptorIndex::build(std::vector<Entry> entries) {
  DescriptorIndex idx;
  if (entries.empty()) return idx;
  idx.dim_ = entries.front().second.size();
  if (idx.dim_ == 0) throw Error(ErrorCode::DimensionMismatch, "descriptors must have dimension >= 1");
  idx.ids_.reserve(entries.size());
  idx.vectors_.reserve(entries.size() * idx.dim_);
  const auto& k = simd::active();
  for (auto& [id, vec] : entries) {
    if (vec.size() != idx.dim_) {
      throw Error(ErrorCode::DimensionMismatch, "descriptor `" + id + "` has dimension " +
                                                    std::to_string(vec.size()) + ", expected " +
                                                    std::to_string(idx.dim_));
    }
    check_finite(vec, "descriptor `" + id + "`");
    const double norm = std::sqrt(k.dot_f64(vec.data(), vec.data(), vec.size()));
    if (!(norm > 0.0)) throw Error(ErrorCode::ZeroVector, "descriptor `" + id + "` has zero norm");
    if (!idx.rows_.emplace(id, idx.ids_.size()).second) throw Error(ErrorCode::DuplicateId, id);
    idx.ids_.push_back(std::move(id));
    idx.norms_.push_back(norm);
    idx.vectors_.insert(idx.vectors_.end(), vec.begin(), vec.end());
  }
  return idx;
}

DescriptorIndex DescriptorIndex::from_table(const DescriptorTable& table) {
  std::vector<Entry> entries;
  entries.reserve(table.ids.size());
  for (std::size_t i = 0; i < table.ids.size(); ++i) {
    const auto first = table.values.begin() + static_cast<std::ptrdiff_t>(i * table.dim);
    entries.emplace_back(table.ids[i], std::vector<double>(first, first + static_cast<std::ptrdiff_t>(table.dim)));
  }
  return build(std::move(entries));
}

std::optional<std::size_t> DescriptorIndex::find(const std::string& id) const {
  if (auto it = rows_.find(id); it != rows_.end()) return it->second;
  return std::nullopt;
}

std::vector<Hit> cosine_topk(const DescriptorIndex& index, std::span<const double> query, std::size_t k,
                             const std::unordered_set<std::string>& exclude) {
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "k must be >= 1");
  if (query.size() != index.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "query has dimension " + std::to_string(query.size()) +
                                                  ", index has " + std::to_string(index.dim()));
  }
  check_finite(query, "query");
  const auto& kern = simd::active();
  const double qnorm = std::sqrt(kern.dot_f64(query.data(), query.data(), query.size()));
  if (!(qnorm > 0.0)) throw Error(ErrorCode::ZeroVector, "query has zero norm");

  std::vector<Hit> all;
  all.reserve(index.size());
  for (std::size_t i = 0; i < index.size(); ++i) {
    const std::string& id = index.ids()[i];
    if (!exclude.empty() && exclude.contains(id)) continue;
    const double dot = kern.dot_f64(query.data(), index.row(i).data(), index.dim());
    const double sim = std::clamp(dot / (qnorm * index.norm(i)), -1.0, 1.0);
    all.push_back({id, sim});
  }
  const std::size_t take = std::min(k, all.size());
  std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(take), all.end(), ranks_before);
  all.resize(take);
  return all;
}

std::map<std::string, std::vector<std::string>> precompute_similars(const DescriptorIndex& index, std::size_t k,
                                                                    unsigned threads) {
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "k must be >= 1");
  if (index.size() < 2) {
    throw Error(ErrorCode::InsufficientEntries, "need at least 2 descriptors to find non-self neighbors");
  }
  std::vector<std::vector<std::string>> lists(index.size());
  parallel_for(index.size(), threads, [&](std::size_t i) {
    const auto hits = cosine_topk(index, index.row(i), k, {index.ids()[i]});
    for (const Hit& h : hits) lists[i].push_back(h.id);
  });
  std::map<std::string, std::vector<std::string>> out;
  for (std::size_t i = 0; i < index.size(); ++i) out.emplace(index.ids()[i], std::move(lists[i]));
  return out;
}

std::vector<double> ThumbnailExtractor::extract(const RgbImage& image) const {
  if (image.width() < kSide || image.height() < kSide) {
    throw Error(ErrorCode::TooSmall, "thumbnail descriptor needs at least 8x8 pixels");
  }
  std::vector<double> out(dim(), 0.0);
  for (int by = 0; by < kSide; ++by) {
    const int y0 = by * image.height() / kSide;
    const int y1 = (by + 1) * image.height() / kSide;
    for (int bx = 0; bx < kSide; ++bx) {
      const int x0 = bx * image.width() / kSide;
      const int x1 = (bx + 1) * image.width() / kSide;
      double sum = 0.0;
      for (int y = y0; y < y1; ++y) {
        for (int x = x0; x < x1; ++x) {
          sum += 0.299 * image.at(x, y, 0) + 0.587 * image.at(x, y, 1) + 0.114 * image.at(x, y, 2);
        }
      }
      out[static_cast<std::size_t>(by * kSide + bx)] = sum / static_cast<double>((y1 - y0) * (x1 - x0));
    }
  }
  return out;
}

std::uint64_t LookupExtractor::content_key(const RgbImage& image) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  auto feed = [&h](std::uint64_t byte) {
    h ^= byte;
    h *= 0x100000001B3ull;
  };
  for (int shift = 0; shift < 32; shift += 8) {
    feed((static_cast<std::uint32_t>(image.width()) >> shift) & 0xFFu);
    feed((static_cast<std::uint32_t>(image.height()) >> shift) & 0xFFu);
  }
  for (double v : image.data()) feed(static_cast<std::uint64_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0)));
  return h;
}

void LookupExtractor::add(const RgbImage& image, std::vector<double> descriptor) {
  if (descriptor.size() != dim_) {
    throw Error(ErrorCode::DimensionMismatch, "lookup descriptor has dimension " + std::to_string(descriptor.size()));
  }
  table_[content_key(image)] = std::move(descriptor);
}

std::vector<double> LookupExtractor::extract(const RgbImage& image) const {
  const auto it = table_.find(content_key(image));
  if (it == table_.end()) throw Error(ErrorCode::UnknownImage, "no precomputed descriptor for this image");
  return it->second;
}

TwoStepResult two_step_retrieve(const RgbImage& masked, const BinaryMask& mask, const Inpainter& coarse,
                                const FeatureExtractor& extractor, const DescriptorIndex& index, std::size_t k) {
  require_same_size(masked, mask, "two_step_retrieve image vs mask");
  if (extractor.dim() != index.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "extractor dimension " + std::to_string(extractor.dim()) +
                                                  " vs index dimension " + std::to_string(index.dim()));
  }
  TwoStepResult r;
  r.coarse = coarse(masked, mask);
  const std::vector<double> descriptor = extractor.extract(r.coarse);
  r.hits = cosine_topk(index, descriptor, k);
  return r;
}

TensorStack assemble_network_input(const RgbImage& masked, const BinaryMask& mask, std::span<const RgbImage> sims) {
  require_same_size(masked, mask, "network input image vs mask");
  for (const RgbImage& s : sims) require_same_size(masked, s, "network input similar image");

  TensorStack t;
  t.width = masked.width();
  t.height = masked.height();
  t.channels = 3 + 1 + 3 * static_cast<int>(sims.size());
  const std::size_t plane = masked.pixel_count();
  t.data.assign(plane * static_cast<std::size_t>(t.channels), 0.0);

  auto put_rgb = [&](const RgbImage& img, int first_channel, bool zero_holes) {
    for (int y = 0; y < t.height; ++y) {
      for (int x = 0; x < t.width; ++x) {
        const bool hole = zero_holes && mask.is_hole(x, y);
        for (int c = 0; c < 3; ++c) {
          t.data[static_cast<std::size_t>(first_channel + c) * plane + mask.index(x, y)] = hole ? 0.0 : img.at(x, y, c);
        }
      }
    }
  };
  put_rgb(masked, 0, true);
  for (std::size_t i = 0; i < plane; ++i) t.data[3 * plane + i] = mask.values()[i];
  for (std::size_t s = 0; s < sims.size(); ++s) put_rgb(sims[s], 4 + 3 * static_cast<int>(s), false);
  return t;
}

StackParts slice_network_input(const TensorStack& t) {
  if (t.channels < 4 || (t.channels - 4) % 3 != 0) {
    throw Error(ErrorCode::ShapeMismatch, "stack has " + std::to_string(t.channels) + " channels, not 3 + 1 + 3k");
  }
  const std::size_t plane = static_cast<std::size_t>(t.width) * static_cast<std::size_t>(t.height);
  auto get_rgb = [&](int first_channel) {
    RgbImage img(t.width, t.height);
    for (std::size_t i = 0; i < plane; ++i) {
      for (int c = 0; c < 3; ++c) img.data()[3 * i + static_cast<std::size_t>(c)] = t.data[static_cast<std::size_t>(first_channel + c) * plane + i];
    }
    return img;
  };
  StackParts p;
  p.masked = get_rgb(0);
  std::vector<std::uint8_t> m(plane);
  for (std::size_t i = 0; i < plane; ++i) m[i] = static_cast<std::uint8_t>(t.data[3 * plane + i]);
  p.mask = BinaryMask::from_values(t.width, t.height, std::move(m));
  for (int c = 4; c < t.channels; c += 3) p.sims.push_back(get_rgb(c));
  return p;
}

}  // namespace qdi
