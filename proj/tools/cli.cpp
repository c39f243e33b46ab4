#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "qdinpaint/corpus.hpp"
#include "qdinpaint/descriptor_io.hpp"
#include "qdinpaint/error.hpp"
#include "qdinpaint/features.hpp"
#include "qdinpaint/float_blob.hpp"
#include "qdinpaint/fmm.hpp"
#include "qdinpaint/losses.hpp"
#include "qdinpaint/mask_gen.hpp"
#include "qdinpaint/metrics.hpp"
#include "qdinpaint/parallel.hpp"
#include "qdinpaint/png_io.hpp"
#include "qdinpaint/report.hpp"
#include "qdinpaint/retrieval.hpp"

namespace qdi::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Globals {
  std::uint64_t seed = 0;
  unsigned threads = 1;
  bool strict = false;
  std::string config;
};

struct GenerateArgs {
  std::vector<std::string> corpus;
  std::string out;
  std::size_t count = 10;
  int min_points = 1;
  GenConfig gen;
  std::string polarity = "hole_is_zero";
  std::string parse_report;
};

struct InpaintArgs {
  std::string method = "telea";
  double radius = 5.0;
  bool simple_level = false;
  std::string image, mask, out;
  std::string mask_polarity = "hole_is_zero";
};

struct RetrieveArgs {
  std::string index, ids, image, mask;
  std::size_t k = 1;
  std::string coarse = "telea";
  double radius = 5.0;
  std::string extractor = "thumb8";
  std::string lookup_dir;
  std::string coarse_out;
  std::string mask_polarity = "hole_is_zero";
};

struct LossArgs {
  std::string out, gt, mask;
  std::string features_out, features_comp, features_gt;
  std::string mask_polarity = "hole_is_zero";
};

struct EvaluateArgs {
  std::string pairs, out, csv, probs;
  std::string region = "image";
  std::string mask_polarity = "hole_is_zero";
};

struct ReportArgs {
  std::string in, out, csv, method;
};

HolePolarity parse_polarity(const std::string& s) {
  return s == "hole_is_one" ? HolePolarity::HoleIsOne : HolePolarity::HoleIsZero;
}

const std::vector<std::string> kPolarities{"hole_is_zero", "hole_is_one"};

std::string key_of(const CLI::Option* opt) {
  std::string name = opt->get_single_name();
  std::replace(name.begin(), name.end(), '-', '_');
  return name;
}

std::vector<std::string> json_inputs(const json& v) {
  if (v.is_array()) {
    std::vector<std::string> out;
    for (const auto& e : v) out.push_back(e.is_string() ? e.get<std::string>() : e.dump());
    return out;
  }
  if (v.is_string()) return {v.get<std::string>()};
  if (v.is_boolean()) return {v.get<bool>() ? "true" : "false"};
  return {v.dump()};
}

std::string value_of(const CLI::Option* opt) {
  if (opt->get_expected_min() == 0 && opt->count() == 0) return "false";
  if (opt->count() == 0) return opt->get_default_str();
  std::string joined;
  for (const auto& r : opt->results()) joined += (joined.empty() ? "" : ",") + r;
  return joined;
}

// defaults < config file < flags. Keys may sit at the top level or under the
// subcommand's name; the latter win.
json resolve_config(CLI::App& app, CLI::App& sub, const std::string& config_path, std::ostream& err) {
  std::map<std::string, json> from_file;
  if (!config_path.empty()) {
    const json j = read_json_file(config_path);
    if (!j.is_object()) throw Error(ErrorCode::InvalidConfig, config_path + ": config must be a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (!it->is_object()) from_file[it.key()] = *it;
    }
    if (auto it = j.find(sub.get_name()); it != j.end()) {
      if (!it->is_object()) throw Error(ErrorCode::InvalidConfig, "config section `" + sub.get_name() + "` must be an object");
      for (auto kv = it->begin(); kv != it->end(); ++kv) from_file[kv.key()] = *kv;
    }
  }

  json resolved = json::object();
  std::set<std::string> used;
  for (CLI::App* scope : {&app, &sub}) {
    for (CLI::Option* opt : scope->get_options()) {
      if (opt->get_single_name() == "help" || opt->get_single_name() == "config") continue;
      const std::string key = key_of(opt);
      std::string source = "default";
      if (opt->count() > 0) {
        source = "flag";
      } else if (auto it = from_file.find(key); it != from_file.end()) {
        opt->clear();
        opt->add_result(json_inputs(it->second));
        opt->run_callback();
        source = "config";
        used.insert(key);
      }
      resolved[key] = {{"value", value_of(opt)}, {"source", source}};
    }
  }
  for (const auto& [key, v] : from_file) {
    if (!used.contains(key)) err << "qdinpaint: config key `" << key << "` does not apply to " << sub.get_name() << '\n';
  }
  err << "qdinpaint: resolved " << json{{"command", sub.get_name()}, {"settings", resolved}}.dump() << '\n';
  return resolved;
}

std::vector<fs::path> expand_corpus(const std::vector<std::string>& inputs) {
  std::vector<fs::path> files;
  for (const auto& in : inputs) {
    const fs::path p(in);
    if (fs::is_directory(p)) {
      for (const auto& e : fs::directory_iterator(p)) {
        if (e.is_regular_file() && e.path().extension() == ".ndjson") files.push_back(e.path());
      }
    } else if (fs::exists(p)) {
      files.push_back(p);
    } else {
      throw Error(ErrorCode::Io, "corpus input not found: " + in);
    }
  }
  if (files.empty()) throw Error(ErrorCode::Io, "no .ndjson corpus files given");
  return files;
}

json hits_json(const std::vector<Hit>& hits) {
  json a = json::array();
  for (const Hit& h : hits) a.push_back({{"id", h.id}, {"similarity", h.similarity}});
  return a;
}

json psnr_json(double v) { return std::isinf(v) ? json("inf") : json(v); }

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::Io, "write failed: " + path.string());
}

json run_generate(const GenerateArgs& a, const Globals& g, std::ostream& err) {
  GenConfig cfg = a.gen;
  cfg.hole_polarity = parse_polarity(a.polarity);
  cfg.validate();

  const auto files = expand_corpus(a.corpus);
  const ParseResult parsed =
      parse_drawing_files(files, g.strict ? ParseMode::Strict : ParseMode::Lenient, g.threads);
  if (parsed.report.records_skipped > 0) {
    err << "qdinpaint: skipped " << parsed.report.records_skipped << " malformed corpus records\n";
  }
  if (!a.parse_report.empty()) write_text(a.parse_report, parsed.report.to_json() + "\n");
  const StrokeCorpus corpus = build_corpus(parsed.drawings, a.min_points);

  const DatasetManifest m = generate_dataset(corpus, a.count, g.seed, cfg, a.out, g.threads);
  double mean_ratio = 0.0;
  for (const auto& e : m.entries) mean_ratio += e.hole_ratio;
  mean_ratio /= static_cast<double>(m.entries.size());
  return {{"command", "generate-masks"},
          {"count", m.entries.size()},
          {"seed", g.seed},
          {"corpus_strokes", corpus.size()},
          {"corpus_drawings", corpus.source_count()},
          {"records_skipped", parsed.report.records_skipped},
          {"points_clamped", parsed.report.points_clamped},
          {"hole_ratio_mean", mean_ratio},
          {"manifest", (fs::path(a.out) / "manifest.json").string()}};
}

json run_inpaint(const InpaintArgs& a) {
  const RgbImage image = read_image(a.image);
  const BinaryMask mask = read_mask(a.mask, parse_polarity(a.mask_polarity));
  const RgbImage out = telea_inpaint(image, mask, {a.radius, a.simple_level});
  write_image(a.out, out);
  return {{"command", "inpaint"},
          {"method", a.method},
          {"radius", a.radius},
          {"holes", mask.hole_count()},
          {"hole_ratio", hole_ratio(mask)},
          {"out", a.out}};
}

json run_retrieve(const RetrieveArgs& a) {
  const DescriptorTable table = read_descriptor_table(a.index, a.ids);
  const DescriptorIndex index = DescriptorIndex::from_table(table);
  const RgbImage image = read_image(a.image);
  const BinaryMask mask = read_mask(a.mask, parse_polarity(a.mask_polarity));

  std::unique_ptr<FeatureExtractor> extractor;
  if (a.extractor == "lookup") {
    if (a.lookup_dir.empty()) throw Error(ErrorCode::InvalidArgument, "--extractor lookup needs --lookup-dir");
    auto lookup = std::make_unique<LookupExtractor>(index.dim());
    for (std::size_t i = 0; i < index.size(); ++i) {
      const fs::path p = fs::path(a.lookup_dir) / (index.ids()[i] + ".png");
      if (!fs::exists(p)) continue;
      const auto row = index.row(i);
      lookup->add(read_image(p), std::vector<double>(row.begin(), row.end()));
    }
    extractor = std::move(lookup);
  } else {
    extractor = std::make_unique<ThumbnailExtractor>();
  }

  Inpainter coarse;
  if (a.coarse == "telea") {
    const TeleaOptions opts{a.radius, false};
    coarse = [opts](const RgbImage& img, const BinaryMask& m) { return telea_inpaint(img, m, opts); };
  } else {
    coarse = [](const RgbImage& img, const BinaryMask&) { return img; };
  }

  const TwoStepResult r = two_step_retrieve(image, mask, coarse, *extractor, index, a.k);
  if (!a.coarse_out.empty()) write_image(a.coarse_out, r.coarse);
  return {{"command", "retrieve"}, {"k", a.k}, {"coarse", a.coarse}, {"extractor", a.extractor},
          {"hits", hits_json(r.hits)}};
}

json run_loss(const LossArgs& a) {
  const RgbImage out = read_image(a.out);
  const RgbImage gt = read_image(a.gt);
  const BinaryMask mask = read_mask(a.mask, parse_polarity(a.mask_polarity));
  require_same_size(out, gt, "loss output vs ground truth");
  require_same_size(out, mask, "loss image vs mask");

  const int given = !a.features_out.empty() + !a.features_comp.empty() + !a.features_gt.empty();
  FeatureStack f_out, f_comp, f_gt;
  std::string source;
  if (given == 0) {
    const RgbImage comp = compose(out, gt, mask);
    f_out = pooled_pyramid(out);
    f_comp = pooled_pyramid(comp);
    f_gt = pooled_pyramid(gt);
    source = "pooled";
  } else if (given == 3) {
    f_out = read_feature_stack(a.features_out);
    f_comp = read_feature_stack(a.features_comp);
    f_gt = read_feature_stack(a.features_gt);
    source = "files";
  } else {
    throw Error(ErrorCode::InvalidArgument, "give all of --features-out, --features-comp, --features-gt or none");
  }
  const LossTerms t = compute_loss_terms(out, gt, mask, f_out, f_comp, f_gt);
  return {{"command", "loss"}, {"features", source}, {"terms", t.to_json()}, {"total", total_loss(t)}};
}

struct PairSpec {
  std::string id;
  fs::path out, gt, mask;
};

std::vector<PairSpec> read_pairs(const fs::path& manifest) {
  const json j = read_json_file(manifest);
  const json& list = j.is_object() ? j.at("pairs") : j;
  if (!list.is_array()) throw Error(ErrorCode::InvalidArgument, manifest.string() + ": expected a list of pairs");
  const fs::path base = manifest.parent_path();
  auto resolve = [&](const json& v) {
    const fs::path p(v.get<std::string>());
    return p.is_absolute() ? p : base / p;
  };
  std::vector<PairSpec> pairs;
  try {
    for (const auto& e : list) {
      PairSpec p;
      p.out = resolve(e.at("out"));
      p.gt = resolve(e.at("gt"));
      p.mask = resolve(e.at("mask"));
      p.id = e.contains("id") ? e.at("id").get<std::string>() : p.out.stem().string();
      pairs.push_back(std::move(p));
    }
  } catch (const json::exception& ex) {
    throw Error(ErrorCode::InvalidArgument, manifest.string() + ": " + ex.what());
  }
  return pairs;
}

json run_evaluate(const EvaluateArgs& a, const Globals& g) {
  const auto pairs = read_pairs(a.pairs);
  const bool hole_only = a.region == "hole";
  const HolePolarity polarity = parse_polarity(a.mask_polarity);
  std::vector<EvalRecord> records(pairs.size());
  parallel_for(pairs.size(), g.threads, [&](std::size_t i) {
    const PairSpec& p = pairs[i];
    const RgbImage out = read_image(p.out);
    const RgbImage gt = read_image(p.gt);
    const BinaryMask mask = read_mask(p.mask, polarity);
    require_same_size(out, mask, "evaluate " + p.id + " image vs mask");
    EvalRecord& r = records[i];
    r.image_id = p.id;
    r.hole_ratio = hole_ratio(mask);
    r.l1_percent = hole_only ? l1_percent_hole(out, gt, mask) : l1_percent(out, gt);
    r.psnr_db = psnr(out, gt);
    r.ssim = ssim(out, gt);
  });

  std::optional<ProbMatrix> probs;
  if (!a.probs.empty()) {
    const FloatBlob blob = read_float_blob(a.probs);
    const std::size_t n = header_field(blob.header, "count");
    const std::size_t c = header_field(blob.header, "classes");
    if (blob.values.size() != n * c) throw Error(ErrorCode::Io, a.probs + ": payload does not match count x classes");
    probs.emplace(n, c, std::vector<double>(blob.values.begin(), blob.values.end()));
  }

  BucketReport rep = bucketize_report(records, probs ? &*probs : nullptr);
  rep.l1_region = hole_only ? "hole" : "image";
  json out = rep.to_json();
  json recs = json::array();
  for (const auto& r : records) {
    recs.push_back({{"image_id", r.image_id},
                    {"hole_ratio", r.hole_ratio},
                    {"l1_percent", r.l1_percent},
                    {"psnr_db", psnr_json(r.psnr_db)},
                    {"ssim", r.ssim}});
  }
  out["records"] = std::move(recs);
  write_json_file(a.out, out);
  const std::string csv = a.csv.empty() ? fs::path(a.out).replace_extension(".records.csv").string() : a.csv;
  write_text(csv, render_records_csv(records));

  json counts = json::array();
  for (const auto& b : rep.buckets) counts.push_back(b.count);
  return {{"command", "evaluate"},
          {"records", records.size()},
          {"bucket_counts", counts},
          {"out_of_range", rep.out_of_range},
          {"report", a.out},
          {"csv", csv}};
}

json run_report(const ReportArgs& a) {
  const BucketReport rep = BucketReport::from_json(read_json_file(a.in));
  write_text(a.out, render_table(rep, a.method));
  const std::string csv = a.csv.empty() ? fs::path(a.out).replace_extension(".csv").string() : a.csv;
  write_text(csv, render_csv(rep));
  return {{"command", "report"}, {"table", a.out}, {"csv", csv}, {"columns", kBucketCount}};
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Irregular-mask generation, fast-marching inpainting, retrieval, losses and bucketed evaluation.",
               "qdinpaint"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1, 1);
  app.fallthrough();

  Globals g;
  app.add_option("--seed", g.seed, "Seed for stochastic subcommands");
  app.add_option("--threads", g.threads, "Worker threads (0 = all cores)");
  app.add_flag("--strict", g.strict, "Fail on malformed input records instead of skipping them");
  app.add_option("--config", g.config, "JSON settings file (flags override it)");

  GenerateArgs ga;
  auto* gen = app.add_subcommand("generate-masks", "Generate an irregular-mask dataset from drawing strokes");
  gen->add_option("--corpus", ga.corpus, "Stroke .ndjson files or directories")->required()->default_str("");
  gen->add_option("--out", ga.out, "Output directory")->required();
  gen->add_option("--count", ga.count, "Number of masks")->check(CLI::PositiveNumber);
  gen->add_option("--min-points", ga.min_points, "Drop strokes with fewer points")->check(CLI::PositiveNumber);
  gen->add_option("--strokes-mean", ga.gen.strokes_mean, "Mean stroke count");
  gen->add_option("--strokes-std", ga.gen.strokes_std, "Stroke count standard deviation");
  gen->add_option("--width-min-px", ga.gen.width_min_px, "Minimum line width");
  gen->add_option("--width-max-px", ga.gen.width_max_px, "Maximum line width");
  gen->add_option("--upscale-min", ga.gen.upscale_min, "Minimum upscale rate");
  gen->add_option("--upscale-max", ga.gen.upscale_max, "Maximum upscale rate");
  gen->add_option("--canvas-px", ga.gen.canvas_px, "Drawing canvas side");
  gen->add_option("--out-px", ga.gen.out_px, "Output mask side");
  gen->add_option("--binarize-threshold", ga.gen.binarize_threshold, "Binarization threshold");
  gen->add_option("--hole-polarity", ga.polarity, "PNG encoding of holes")->check(CLI::IsMember(kPolarities));
  gen->add_option("--parse-report", ga.parse_report, "Write the corpus parse report JSON here");

  InpaintArgs ia;
  auto* inp = app.add_subcommand("inpaint", "Fill mask holes with fast-marching (Telea) inpainting");
  inp->add_option("--method", ia.method, "Inpainting method")->check(CLI::IsMember({"telea"}));
  inp->add_option("--radius", ia.radius, "Neighborhood radius in pixels")->check(CLI::Range(1.0, 1e6));
  inp->add_flag("--simple-level", ia.simple_level, "Use T = 0 on known pixels");
  inp->add_option("--image", ia.image, "Input PNG")->required();
  inp->add_option("--mask", ia.mask, "Mask PNG")->required();
  inp->add_option("--out", ia.out, "Output PNG")->required();
  inp->add_option("--mask-polarity", ia.mask_polarity, "Mask PNG encoding")->check(CLI::IsMember(kPolarities));

  RetrieveArgs ra;
  auto* ret = app.add_subcommand("retrieve", "Two-step similar-image retrieval (coarse inpaint, then cosine kNN)");
  ret->add_option("--index", ra.index, "Descriptor table")->required();
  ret->add_option("--ids", ra.ids, "Descriptor id list (JSON)")->required();
  ret->add_option("--image", ra.image, "Masked query PNG")->required();
  ret->add_option("--mask", ra.mask, "Mask PNG")->required();
  ret->add_option("--k", ra.k, "Neighbors to return")->check(CLI::PositiveNumber);
  ret->add_option("--coarse", ra.coarse, "Coarse inpainter")->check(CLI::IsMember({"telea", "none"}));
  ret->add_option("--radius", ra.radius, "Telea radius for the coarse step")->check(CLI::Range(1.0, 1e6));
  ret->add_option("--extractor", ra.extractor, "Descriptor extractor")->check(CLI::IsMember({"thumb8", "lookup"}));
  ret->add_option("--lookup-dir", ra.lookup_dir, "Database images named <id>.png for --extractor lookup");
  ret->add_option("--coarse-out", ra.coarse_out, "Write the coarse inpainting here");
  ret->add_option("--mask-polarity", ra.mask_polarity, "Mask PNG encoding")->check(CLI::IsMember(kPolarities));

  LossArgs la;
  auto* los = app.add_subcommand("loss", "Compute the inpainting loss terms and their weighted total");
  los->add_option("--out", la.out, "Model output PNG")->required();
  los->add_option("--gt", la.gt, "Ground truth PNG")->required();
  los->add_option("--mask", la.mask, "Mask PNG")->required();
  los->add_option("--features-out", la.features_out, "Feature stack of the output");
  los->add_option("--features-comp", la.features_comp, "Feature stack of the composite");
  los->add_option("--features-gt", la.features_gt, "Feature stack of the ground truth");
  los->add_option("--mask-polarity", la.mask_polarity, "Mask PNG encoding")->check(CLI::IsMember(kPolarities));

  EvaluateArgs ea;
  auto* eva = app.add_subcommand("evaluate", "Score (out, gt, mask) triples and bucket them by hole ratio");
  eva->add_option("--pairs", ea.pairs, "JSON list of {out, gt, mask[, id]}")->required();
  eva->add_option("--out", ea.out, "Report JSON")->required();
  eva->add_option("--csv", ea.csv, "Per-record CSV (default: <out>.records.csv)");
  eva->add_option("--probs", ea.probs, "Class posteriors for the inception score");
  eva->add_option("--region", ea.region, "L1 over the whole image or the hole")->check(CLI::IsMember({"image", "hole"}));
  eva->add_option("--mask-polarity", ea.mask_polarity, "Mask PNG encoding")->check(CLI::IsMember(kPolarities));

  ReportArgs pa;
  auto* rep = app.add_subcommand("report", "Render a bucket report as an aligned table and CSV");
  rep->add_option("--in", pa.in, "Report JSON from evaluate")->required();
  rep->add_option("--out", pa.out, "Text table")->required();
  rep->add_option("--csv", pa.csv, "CSV (default: <out>.csv)");
  rep->add_option("--method", pa.method, "Method label for row names");

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "qdinpaint: " << e.what() << "\n\n" << app.help();
    return kValidation;
  }

  CLI::App* sub = app.get_subcommands().front();
  try {
    resolve_config(app, *sub, g.config, err);
    json summary;
    if (sub == gen) {
      summary = run_generate(ga, g, err);
    } else if (sub == inp) {
      summary = run_inpaint(ia);
    } else if (sub == ret) {
      summary = run_retrieve(ra);
    } else if (sub == los) {
      summary = run_loss(la);
    } else if (sub == eva) {
      summary = run_evaluate(ea, g);
    } else {
      summary = run_report(pa);
    }
    out << summary.dump() << '\n';
    return kOk;
  } catch (const Error& e) {
    err << "qdinpaint: " << e.what() << '\n';
    return e.is_io() ? kIo : kValidation;
  } catch (const fs::filesystem_error& e) {
    err << "qdinpaint: " << e.what() << '\n';
    return kIo;
  } catch (const CLI::ParseError& e) {
    err << "qdinpaint: config: " << e.what() << '\n';
    return kValidation;
  } catch (const std::exception& e) {
    err << "qdinpaint: " << e.what() << '\n';
    return kValidation;
  }
}

}  // namespace qdi::cli
