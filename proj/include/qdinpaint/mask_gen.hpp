#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "qdinpaint/corpus.hpp"
#include "qdinpaint/image.hpp"
#include "qdinpaint/png_io.hpp"
#include "qdinpaint/raster.hpp"
#include "qdinpaint/rng.hpp"

namespace qdi {

struct GenConfig {
  double strokes_mean = 4.0;
  double strokes_std = 2.0;  // standard deviation, not variance
  double width_min_px = 5.0;
  double width_max_px = 15.0;
  double upscale_min = 1.0;
  double upscale_max = 1.5;
  int canvas_px = 256;
  int out_px = 256;
  double binarize_threshold = 0.5;
  HolePolarity hole_polarity = HolePolarity::HoleIsZero;

  // Throws InvalidConfig.
  void validate() const;
};

nlohmann::json to_json(const GenConfig& config);
// Missing keys keep the values already in `config`.
void merge_json(GenConfig& config, const nlohmann::json& j);

struct MaskRecipe {
  int n_strokes = 0;
  std::vector<std::size_t> stroke_indices;
  std::vector<double> widths_px;
  double upscale = 1.0;
  std::uint64_t sub_seed = 0;

  // FNV-1a over the recipe's fields (doubles by bit pattern), 16 hex digits.
  std::string digest() const;
  bool operator==(const MaskRecipe&) const = default;
};

// Draw order: stroke count, then (index, width) per stroke, then upscale.
// n_strokes = max(1, round(N(mean, std))).
MaskRecipe sample_recipe(Rng& rng, const GenConfig& config, std::size_t corpus_len);

// Recipe for dataset item `index`, drawn from Rng(mix_seed(seed, index)).
MaskRecipe recipe_for_index(std::uint64_t seed, std::uint64_t index, const GenConfig& config,
                            std::size_t corpus_len);

// Rasterize -> bilinear upscale -> central crop -> threshold. Stroke pixels become holes.
BinaryMask render_mask(const MaskRecipe& recipe, const StrokeCorpus& corpus, const GenConfig& config);

// The pre-upscale canvas with every recipe stroke drawn.
Canvas draw_recipe(const MaskRecipe& recipe, const StrokeCorpus& corpus, const GenConfig& config);

// Bilinear resample of a binary canvas by `upscale` (pixel-center aligned,
// edge-clamped), central crop to out_px, then `value >= threshold` marks a stroke.
Canvas upscale_crop_binarize(const Canvas& canvas, double upscale, int out_px, double threshold);

struct ManifestEntry {
  std::string file;
  std::string recipe_digest;
  int n_strokes = 0;
  double hole_ratio = 0.0;
};

struct DatasetManifest {
  std::uint64_t seed = 0;
  GenConfig config;
  std::vector<ManifestEntry> entries;

  nlohmann::json to_json() const;
};

std::string mask_file_name(std::size_t index, std::size_t count);

// Writes one PNG per mask plus manifest.json into `sink`. Output bytes depend
// only on (corpus, count, seed, config), never on `threads`.
DatasetManifest generate_dataset(const StrokeCorpus& corpus, std::size_t count, std::uint64_t seed,
                                 const GenConfig& config, const std::filesystem::path& sink,
                                 unsigned threads = 1);

}  // namespace qdi
