#include "qdinpaint/mask_gen.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "qdinpaint/error.hpp"
#include "qdinpaint/parallel.hpp"

namespace qdi {

namespace {

constexpr double kMaxStrokes = 1e6;

int upscaled_extent(int canvas_px, double upscale) {
  return static_cast<int>(std::ceil(static_cast<double>(canvas_px) * upscale));
}

class Fnv1a {
 public:
  void add(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      hash_ ^= (v >> (8 * i)) & 0xFFu;
      hash_ *= 0x100000001B3ull;
    }
  }
  void add(double v) { add(std::bit_cast<std::uint64_t>(v)); }
  std::uint64_t value() const { return hash_; }

 private:
  std::uint64_t hash_ = 0xCBF29CE484222325ull;
};

const char* polarity_name(HolePolarity p) { return p == HolePolarity::HoleIsZero ? "hole_is_zero" : "hole_is_one"; }

}  // namespace

void GenConfig::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::InvalidConfig, msg); };
  if (!std::isfinite(strokes_mean)) fail("strokes_mean must be finite");
  if (!(strokes_std >= 0.0) || !std::isfinite(strokes_std)) fail("strokes_std must be >= 0");
  if (!(width_min_px > 0.0) || !(width_min_px <= width_max_px) || !std::isfinite(width_max_px)) {
    fail("need 0 < width_min_px <= width_max_px");
  }
  if (!(upscale_min >= 1.0) || !(upscale_min <= upscale_max) || !std::isfinite(upscale_max)) {
    fail("need 1.0 <= upscale_min <= upscale_max");
  }
  if (canvas_px < 1 || out_px < 1) fail("canvas_px and out_px must be positive");
  if (out_px > upscaled_extent(canvas_px, upscale_min)) fail("out_px exceeds ceil(canvas_px * upscale_min)");
  if (!(binarize_threshold > 0.0 && binarize_threshold < 1.0)) fail("binarize_threshold must be in (0, 1)");
}

nlohmann::json to_json(const GenConfig& c) {
  return {{"strokes_mean", c.strokes_mean},
          {"strokes_std", c.strokes_std},
          {"width_min_px", c.width_min_px},
          {"width_max_px", c.width_max_px},
          {"upscale_min", c.upscale_min},
          {"upscale_max", c.upscale_max},
          {"canvas_px", c.canvas_px},
          {"out_px", c.out_px},
          {"binarize_threshold", c.binarize_threshold},
          {"hole_polarity", polarity_name(c.hole_polarity)}};
}

void merge_json(GenConfig& c, const nlohmann::json& j) {
  if (!j.is_object()) throw Error(ErrorCode::InvalidConfig, "generator config must be a JSON object");
  try {
    auto take = [&](const char* key, auto& field) {
      if (auto it = j.find(key); it != j.end()) it->get_to(field);
    };
    take("strokes_mean", c.strokes_mean);
    take("strokes_std", c.strokes_std);
    take("width_min_px", c.width_min_px);
    take("width_max_px", c.width_max_px);
    take("upscale_min", c.upscale_min);
    take("upscale_max", c.upscale_max);
    take("canvas_px", c.canvas_px);
    take("out_px", c.out_px);
    take("binarize_threshold", c.binarize_threshold);
    if (auto it = j.find("hole_polarity"); it != j.end()) {
      const auto name = it->get<std::string>();
      if (name == "hole_is_zero") {
        c.hole_polarity = HolePolarity::HoleIsZero;
      } else if (name == "hole_is_one") {
        c.hole_polarity = HolePolarity::HoleIsOne;
      } else {
        throw Error(ErrorCode::InvalidConfig, "unknown hole_polarity " + name);
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, e.what());
  }
}

std::string MaskRecipe::digest() const {
  Fnv1a h;
  h.add(static_cast<std::uint64_t>(n_strokes));
  for (std::size_t i = 0; i < stroke_indices.size(); ++i) {
    h.add(static_cast<std::uint64_t>(stroke_indices[i]));
    h.add(widths_px[i]);
  }
  h.add(upscale);
  h.add(sub_seed);
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h.value()));
  return buf;
}

MaskRecipe sample_recipe(Rng& rng, const GenConfig& config, std::size_t corpus_len) {
  if (corpus_len == 0) throw Error(ErrorCode::EmptyCorpus, "cannot sample strokes from an empty corpus");
  MaskRecipe r;
  const double x = std::round(rng.normal(config.strokes_mean, config.strokes_std));
  r.n_strokes = static_cast<int>(std::clamp(x, 1.0, kMaxStrokes));
  r.stroke_indices.reserve(static_cast<std::size_t>(r.n_strokes));
  r.widths_px.reserve(static_cast<std::size_t>(r.n_strokes));
  for (int i = 0; i < r.n_strokes; ++i) {
    r.stroke_indices.push_back(static_cast<std::size_t>(rng.below(corpus_len)));
    r.widths_px.push_back(rng.uniform(config.width_min_px, config.width_max_px));
  }
  r.upscale = rng.uniform(config.upscale_min, config.upscale_max);
  return r;
}

MaskRecipe recipe_for_index(std::uint64_t seed, std::uint64_t index, const GenConfig& config,
                            std::size_t corpus_len) {
  const std::uint64_t sub_seed = mix_seed(seed, index);
  Rng rng(sub_seed);
  MaskRecipe r = sample_recipe(rng, config, corpus_len);
  r.sub_seed = sub_seed;
  return r;
}

Canvas draw_recipe(const MaskRecipe& recipe, const StrokeCorpus& corpus, const GenConfig& config) {
  if (recipe.stroke_indices.size() != recipe.widths_px.size()) {
    throw Error(ErrorCode::InvalidArgument, "recipe index/width lists differ in length");
  }
  Canvas canvas(config.canvas_px, config.canvas_px);
  for (std::size_t i = 0; i < recipe.stroke_indices.size(); ++i) {
    const Stroke& s = corpus.at(recipe.stroke_indices[i]);
    rasterize_polyline(canvas, s.points, recipe.widths_px[i]);
  }
  return canvas;
}

Canvas upscale_crop_binarize(const Canvas& canvas, double upscale, int out_px, double threshold) {
  const int src_w = canvas.width();
  const int src_h = canvas.height();
  const int up_w = upscaled_extent(src_w, upscale);
  const int up_h = upscaled_extent(src_h, upscale);
  if (out_px > up_w || out_px > up_h) {
    throw Error(ErrorCode::InvalidConfig, "crop larger than the upscaled canvas");
  }
  const int off_x = (up_w - out_px) / 2;
  const int off_y = (up_h - out_px) / 2;

  struct Tap {
    int i0, i1;
    double f;
  };
  auto taps = [&](int src, int up, int off) {
    std::vector<Tap> t(static_cast<std::size_t>(out_px));
    const double inv = static_cast<double>(src) / static_cast<double>(up);
    for (int o = 0; o < out_px; ++o) {
      double s = (static_cast<double>(o + off) + 0.5) * inv - 0.5;
      s = std::clamp(s, 0.0, static_cast<double>(src - 1));
      const int i0 = static_cast<int>(std::floor(s));
      t[static_cast<std::size_t>(o)] = {i0, std::min(i0 + 1, src - 1), s - i0};
    }
    return t;
  };
  const auto tx = taps(src_w, up_w, off_x);
  const auto ty = taps(src_h, up_h, off_y);

  Canvas out(out_px, out_px);
  for (int oy = 0; oy < out_px; ++oy) {
    const Tap& ry = ty[static_cast<std::size_t>(oy)];
    for (int ox = 0; ox < out_px; ++ox) {
      const Tap& rx = tx[static_cast<std::size_t>(ox)];
      const double top = (1.0 - rx.f) * canvas.at(rx.i0, ry.i0) + rx.f * canvas.at(rx.i1, ry.i0);
      const double bottom = (1.0 - rx.f) * canvas.at(rx.i0, ry.i1) + rx.f * canvas.at(rx.i1, ry.i1);
      const double v = (1.0 - ry.f) * top + ry.f * bottom;
      if (v >= threshold) out.mark(ox, oy);
    }
  }
  return out;
}

BinaryMask render_mask(const MaskRecipe& recipe, const StrokeCorpus& corpus, const GenConfig& config) {
  const Canvas drawn = draw_recipe(recipe, corpus, config);
  const Canvas field = upscale_crop_binarize(drawn, recipe.upscale, config.out_px, config.binarize_threshold);
  std::vector<std::uint8_t> values(field.cells().size());
  std::transform(field.cells().begin(), field.cells().end(), values.begin(),
                 [](std::uint8_t stroke) { return stroke ? BinaryMask::kHole : BinaryMask::kValid; });
  return BinaryMask::from_values(config.out_px, config.out_px, std::move(values));
}

nlohmann::json DatasetManifest::to_json() const {
  nlohmann::json items = nlohmann::json::array();
  for (const auto& e : entries) {
    items.push_back({{"file", e.file},
                     {"recipe_digest", e.recipe_digest},
                     {"n_strokes", e.n_strokes},
                     {"hole_ratio", e.hole_ratio}});
  }
  return {{"seed", seed},
          {"count", entries.size()},
          {"sub_seed", "splitmix64(seed ^ splitmix64(index))"},
          {"config", qdi::to_json(config)},
          {"entries", std::move(items)}};
}

std::string mask_file_name(std::size_t index, std::size_t count) {
  std::size_t digits = 1;
  for (std::size_t n = count > 0 ? count - 1 : 0; n >= 10; n /= 10) ++digits;
  digits = std::max<std::size_t>(digits, 6);
  std::string s = std::to_string(index);
  return std::string(digits - std::min(digits, s.size()), '0') + s + ".png";
}

DatasetManifest generate_dataset(const StrokeCorpus& corpus, std::size_t count, std::uint64_t seed,
                                 const GenConfig& config, const std::filesystem::path& sink, unsigned threads) {
  config.validate();
  if (count < 1) throw Error(ErrorCode::InvalidArgument, "count must be >= 1");
  if (corpus.empty()) throw Error(ErrorCode::EmptyCorpus, "corpus has no strokes");

  std::error_code ec;
  std::filesystem::create_directories(sink, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create " + sink.string() + ": " + ec.message());

  DatasetManifest manifest;
  manifest.seed = seed;
  manifest.config = config;
  manifest.entries.resize(count);

  parallel_for(count, threads, [&](std::size_t i) {
    const MaskRecipe recipe = recipe_for_index(seed, i, config, corpus.size());
    const BinaryMask mask = render_mask(recipe, corpus, config);
    ManifestEntry& e = manifest.entries[i];
    e.file = mask_file_name(i, count);
    e.recipe_digest = recipe.digest();
    e.n_strokes = recipe.n_strokes;
    e.hole_ratio = hole_ratio(mask);
    write_mask(sink / e.file, mask, config.hole_polarity);
  });

  const auto path = sink / "manifest.json";
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << manifest.to_json().dump(2) << '\n';
  if (!out) throw Error(ErrorCode::Io, "write failed: " + path.string());
  return manifest;
}

}  // namespace qdi
