// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <iterator>
#include <random>
#include <sstream>

#include <json.hpp>

#include "../common/oracles.hpp"
#include "cli.hpp"
#include "qdinpaint/fmm.hpp"
#include "qdinpaint/losses.hpp"
#include "qdinpaint/mask_gen.hpp"
#include "qdinpaint/metrics.hpp"
#include "qdinpaint/raster.hpp"
#include "qdinpaint/retrieval.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace qdi;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

int cli(const std::vector<std::string>& args, std::string* out = nullptr) {
  std::ostringstream o, e;
  const int code = qdi::cli::run(args, o, e);
  if (out) *out = o.str();
  if (code != 0) std::cerr << "  [" << args.front() << "] " << e.str();
  return code;
}

bool same_tree(const fs::path& a, const fs::path& b) {
  std::size_t n = 0;
  for (const auto& e : fs::directory_iterator(a)) {
    if (slurp(e.path()) != slurp(b / e.path().filename())) return false;
    ++n;
  }
  return n > 0 && n == static_cast<std::size_t>(std::distance(fs::directory_iterator(b), fs::directory_iterator{}));
}

// Each check appends to `why` when it fails.
struct Checks {
  std::string why;
  void expect(bool ok, const std::string& what) {
    if (!ok) why += (why.empty() ? "" : "; ") + what;
  }
  bool ok() const { return why.empty(); }
};

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}

const std::string kCorpus = (oracle::data_dir() / "quickdraw_sample.ndjson").string();

// -- 1 and 3 share the 10,000-mask run --------------------------------------

json g_big_manifest;

Checks determinism() {
  Checks c;
  const auto a = oracle::scratch_dir("acc_a"), b = oracle::scratch_dir("acc_b"), t8 = oracle::scratch_dir("acc_t8");
  auto gen = [&](const fs::path& out, const char* threads) {
    return cli({"--seed", "7", "--threads", threads, "generate-masks", "--count", "100", "--corpus", kCorpus, "--out",
                out.string()});
  };
  c.expect(gen(a, "1") == 0 && gen(b, "1") == 0 && gen(t8, "8") == 0, "generate-masks failed");
  c.expect(same_tree(a, b), "two runs differ");
  c.expect(same_tree(a, t8), "1 vs 8 threads differ");

  const auto big = oracle::scratch_dir("acc_10k");
  const auto t0 = Clock::now();
  c.expect(cli({"--seed", "7", "--threads", "1", "generate-masks", "--count", "10000", "--corpus", kCorpus, "--out",
                big.string()}) == 0,
           "10k run failed");
  const double secs = seconds_since(t0);
  c.expect(secs < 60.0, "10k masks took " + fmt(secs) + " s");
  g_big_manifest = json::parse(slurp(big / "manifest.json"));
  std::cout << "  10,000 masks in " << fmt(secs) << " s on one thread\n";
  for (const auto& d : {a, b, t8, big}) fs::remove_all(d);
  return c;
}

Checks parameter_fidelity() {
  Checks c;
  const GenConfig cfg;
  double sum = 0, sum2 = 0;
  for (std::uint64_t i = 0; i < 1000; ++i) {
    const MaskRecipe r = recipe_for_index(2024, i, cfg, 1386);
    for (double w : r.widths_px) c.expect(w >= 5.0 && w <= 15.0, "width " + fmt(w));
    c.expect(r.upscale >= 1.0 && r.upscale <= 1.5, "upscale " + fmt(r.upscale));
    sum += r.n_strokes;
    sum2 += static_cast<double>(r.n_strokes) * r.n_strokes;
  }
  const double mean = sum / 1000, sd = std::sqrt(sum2 / 1000 - mean * mean);
  c.expect(mean >= 3.7 && mean <= 4.3, "stroke count mean " + fmt(mean));
  c.expect(sd >= 1.7 && sd <= 2.3, "stroke count std " + fmt(sd));
  std::cout << "  stroke count mean " << fmt(mean) << ", std " << fmt(sd) << '\n';
  return c;
}

Checks bucket_coverage() {
  Checks c;
  std::array<std::size_t, kBucketCount> counts{};
  std::size_t outside = 0;
  for (const auto& e : g_big_manifest.at("entries")) {
    if (auto b = bucket_of(e.at("hole_ratio").get<double>())) ++counts[*b];
    else ++outside;
  }
  std::cout << "  buckets:";
  for (std::size_t b = 0; b < kBucketCount; ++b) {
    std::cout << ' ' << bucket_label(b) << '=' << counts[b];
    c.expect(counts[b] >= 1, bucket_label(b) + " empty");
  }
  std::cout << ", outside=" << outside << '\n';
  return c;
}

Checks raster_oracle() {
  Checks c;
  std::mt19937_64 g(404);
  std::uniform_int_distribution<int> coord(-6, 69), npts(1, 5);
  std::uniform_real_distribution<double> width(0.5, 16.0);
  int matched = 0;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Point> pts(static_cast<std::size_t>(npts(g)));
    for (Point& p : pts) p = {coord(g), coord(g)};
    const double w = width(g);
    Canvas canvas(64, 64);
    rasterize_polyline(canvas, pts, w);
    const std::vector<std::uint8_t> got(canvas.cells().begin(), canvas.cells().end());
    matched += got == oracle::brute_force_raster(64, 64, pts, w);
  }
  c.expect(matched == 100, std::to_string(matched) + "/100 matched");
  return c;
}

Checks fmm() {
  Checks c;
  c.expect(eikonal_update(0.0, kInfinity, kInfinity, kInfinity) == 1.0, "one-neighbor update");
  c.expect(std::abs(eikonal_update(0.0, kInfinity, 0.0, kInfinity) - 0.70711) <= 1e-5 &&
               std::abs(eikonal_update(0.0, kInfinity, 0.0, kInfinity) - std::sqrt(0.5)) <= 1e-9,
           "two-neighbor update");

  std::mt19937_64 g(55);
  for (int i = 0; i < 10; ++i) {
    const RgbImage flat(48, 40, 0.1 * i);
    BinaryMask m = oracle::random_mask(g, 48, 40, 0.05 + 0.09 * i);
    m.set(0, 0, BinaryMask::kValid);
    c.expect(telea_inpaint(flat, m) == flat, "constant image changed");
  }

  int preserved = 0;
  std::uniform_int_distribution<int> side(12, 64);
  for (int i = 0; i < 100; ++i) {
    const int w = side(g), h = side(g);
    const RgbImage img = oracle::random_image(g, w, h);
    BinaryMask m = oracle::random_mask(g, w, h, 0.05 + 0.006 * i);
    m.set(w / 2, h / 2, BinaryMask::kValid);
    const RgbImage out = telea_inpaint(img, m, {1.0 + (i % 7), i % 3 == 0});
    bool ok = true;
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x)
        for (int ch = 0; ch < 3; ++ch)
          if (!m.is_hole(x, y) && out.at(x, y, ch) != img.at(x, y, ch)) ok = false;
    preserved += ok;
  }
  c.expect(preserved == 100, "valid pixels preserved in " + std::to_string(preserved) + "/100");

  RgbImage ramp(64, 64);
  BinaryMask hole(64, 64);
  for (int y = 0; y < 64; ++y)
    for (int x = 0; x < 64; ++x) {
      for (int ch = 0; ch < 3; ++ch) ramp.at(x, y, ch) = x / 63.0;
      if (x >= 28 && x < 36 && y >= 28 && y < 36) hole.set(x, y, BinaryMask::kHole);
    }
  RgbImage masked = ramp;
  for (int y = 0; y < 64; ++y)
    for (int x = 0; x < 64; ++x)
      if (hole.is_hole(x, y))
        for (int ch = 0; ch < 3; ++ch) masked.at(x, y, ch) = 0.0;
  const RgbImage filled = telea_inpaint(masked, hole, {5.0, false});
  double worst = 0;
  for (std::size_t i = 0; i < filled.size(); ++i) worst = std::max(worst, std::abs(filled.data()[i] - ramp.data()[i]));
  c.expect(worst < 0.02, "ramp error " + fmt(worst));

  // 256x256, a 20% stroke mask from the generator
  std::ifstream corpus_in(kCorpus);
  const StrokeCorpus corpus = build_corpus(parse_drawings(corpus_in, ParseMode::Strict).drawings, 1);
  BinaryMask mask;
  double best = 1.0;
  for (std::uint64_t i = 0; i < 200; ++i) {
    const BinaryMask cand = render_mask(recipe_for_index(99, i, GenConfig{}, corpus.size()), corpus, GenConfig{});
    if (std::abs(hole_ratio(cand) - 0.2) < std::abs(best - 0.2)) {
      best = hole_ratio(cand);
      mask = cand;
    }
  }
  const RgbImage photo = oracle::random_image(g, 256, 256);
  const auto t0 = Clock::now();
  telea_inpaint(photo, mask);
  const double secs = seconds_since(t0);
  c.expect(std::abs(best - 0.2) < 0.01, "no mask near 20% (best " + fmt(best) + ")");
  c.expect(secs < 2.0, "256x256 inpaint took " + fmt(secs) + " s");
  std::cout << "  ramp max error " << fmt(worst) << ", 256x256 at hole ratio " << fmt(best) << " in " << fmt(secs)
            << " s\n";
  return c;
}

Checks losses() {
  Checks c;
  const std::vector<std::array<int, 3>> shapes{{4, 8, 8}, {6, 4, 4}, {8, 2, 2}};
  std::mt19937_64 g(606);
  int matched = 0;
  double worst_add = 0;
  for (int i = 0; i < 100; ++i) {
    const RgbImage out = oracle::random_image(g, 8, 8), gt = oracle::random_image(g, 8, 8);
    const BinaryMask m = oracle::random_mask(g, 8, 8, 0.1 + 0.005 * i);
    const auto fo = oracle::random_stack(g, shapes), fc = oracle::random_stack(g, shapes), fg = oracle::random_stack(g, shapes);
    const LossTerms t = compute_loss_terms(out, gt, m, fo, fc, fg);
    const bool ok = oracle::rel_close(t.l_valid, oracle::naive_masked_l1(out, gt, m, false), 1e-9) &&
                    oracle::rel_close(t.l_hole, oracle::naive_masked_l1(out, gt, m, true), 1e-9) &&
                    oracle::rel_close(t.l_tv, oracle::naive_tv(oracle::naive_compose(out, gt, m), m), 1e-9) &&
                    oracle::rel_close(t.l_perc_out, oracle::naive_perceptual(fo, fg), 1e-9) &&
                    oracle::rel_close(t.l_perc_comp, oracle::naive_perceptual(fc, fg), 1e-9) &&
                    oracle::rel_close(t.l_style_out, oracle::naive_style(fo, fg), 1e-9) &&
                    oracle::rel_close(t.l_style_comp, oracle::naive_style(fc, fg), 1e-9);
    matched += ok;
    const double all = masked_l1(out, gt, BinaryMask(8, 8), Region::Valid);
    worst_add = std::max(worst_add, std::abs(t.l_hole + t.l_valid - all));

    const LossTerms truth = compute_loss_terms(gt, gt, m, fg, fg, fg);
    c.expect(truth.l_valid == 0 && truth.l_hole == 0 && truth.l_perc_out == 0 && truth.l_perc_comp == 0 &&
                 truth.l_style_out == 0 && truth.l_style_comp == 0,
             "nonzero comparison term at truth");
  }
  const auto f = oracle::random_stack(g, shapes);
  c.expect(total_loss(compute_loss_terms(RgbImage(8, 8, 0.4), RgbImage(8, 8, 0.4), oracle::random_mask(g, 8, 8, 0.3), f,
                                         f, f)) == 0.0,
           "total at truth on a flat image");
  std::cout << "  zero-at-truth checked on the six comparison terms; tv of a non-flat truth is not zero\n";
  c.expect(matched == 100, std::to_string(matched) + "/100 oracle matches");
  c.expect(worst_add <= 1e-12, "additivity error " + fmt(worst_add));
  const double total = total_loss(LossTerms{1, 1, 1, 1, 1, 1, 1});
  c.expect(std::abs(total - 247.2) <= 1e-9, "total(all ones) = " + fmt(total));
  return c;
}

Checks metrics() {
  Checks c;
  const RgbImage base(32, 32, 0.2);
  RgbImage off1 = base, off5(32, 32, 0.7);
  for (double& v : off1.data()) v += 0.1;
  c.expect(std::abs(psnr(base, off1) - 20.0) <= 1e-6, "psnr 0.1 offset " + fmt(psnr(base, off1)));
  c.expect(std::abs(psnr(base, off5) - 10 * std::log10(4.0)) <= 1e-6 && std::abs(psnr(base, off5) - 6.0206) <= 1e-4,
           "psnr 0.5 offset " + fmt(psnr(base, off5)));
  std::mt19937_64 g(707);
  const RgbImage a = oracle::random_image(g, 40, 30);
  c.expect(std::abs(ssim(a, a) - 1.0) <= 1e-9, "ssim(x,x)");
  const double sc = ssim(RgbImage(16, 16, 0.0), RgbImage(16, 16, 1.0));
  c.expect(std::abs(sc - 9.999e-5) <= 1e-7, "constant ssim " + fmt(sc));
  c.expect(inception_score(ProbMatrix(3, 2, {0.3, 0.7, 0.3, 0.7, 0.3, 0.7})) == 1.0, "IS identical rows");
  std::vector<double> eye(16, 0.0);
  for (int i = 0; i < 4; ++i) eye[i * 4 + i] = 1.0;
  c.expect(std::abs(inception_score(ProbMatrix(4, 4, eye)) - 4.0) <= 1e-9, "IS one-hot");
  c.expect(bucket_of(0.01) == 0u, "0.01");
  c.expect(bucket_of(0.1) == 0u, "0.1");
  c.expect(bucket_of(0.1 + 1e-7) == 1u, "0.1+eps");
  c.expect(bucket_of(0.6) == 5u, "0.6");
  c.expect(!bucket_of(0.005).has_value(), "0.005");
  return c;
}

Checks retrieval() {
  Checks c;
  int matched = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    std::mt19937_64 g(seed);
    std::normal_distribution<double> nd(0.0, 1.0);
    std::vector<std::string> ids;
    std::vector<std::vector<double>> vecs;
    std::vector<DescriptorIndex::Entry> entries;
    for (int i = 0; i < 1000; ++i) {
      std::vector<double> v(64);
      for (double& x : v) x = nd(g);
      ids.push_back("id" + std::to_string((i * 389) % 1000));
      vecs.push_back(v);
      entries.emplace_back(ids.back(), v);
    }
    const auto index = DescriptorIndex::build(std::move(entries));
    std::vector<double> q(64);
    for (double& x : q) x = nd(g);
    const auto hits = cosine_topk(index, q, 16);
    const auto want = oracle::brute_topk(ids, vecs, q, 16);
    bool same = hits.size() == want.size();
    for (std::size_t i = 0; same && i < hits.size(); ++i)
      same = hits[i].id == want[i].id && std::abs(hits[i].similarity - want[i].similarity) <= 1e-12;
    matched += same;

    if (seed < 10) {
      for (double s : {1e-12, 0.37, 1e8}) {
        std::vector<double> scaled(q);
        for (double& x : scaled) x *= s;
        const auto sh = cosine_topk(index, scaled, 16);
        bool eq = sh.size() == hits.size();
        for (std::size_t i = 0; eq && i < sh.size(); ++i)
          eq = sh[i].id == hits[i].id && std::abs(sh[i].similarity - hits[i].similarity) <= 1e-12;
        c.expect(eq, "scale " + fmt(s) + " changed hits");
      }
      for (const auto& [id, list] : precompute_similars(index, 5))
        for (const auto& other : list) c.expect(other != id, "self retrieved");
    }
  }
  c.expect(matched == 100, std::to_string(matched) + "/100 brute-force matches");
  const RgbImage img(16, 16, 0.5);
  const BinaryMask m(16, 16);
  for (std::size_t k = 0; k <= 2; ++k) {
    const std::vector<RgbImage> sims(k, img);
    const int ch = assemble_network_input(img, m, sims).channels;
    c.expect(ch == static_cast<int>(3 + 1 + 3 * k), "k=" + std::to_string(k) + " gave " + std::to_string(ch));
  }
  return c;
}

Checks end_to_end() {
  Checks c;
  const fs::path fx = oracle::fixture_dir() / "e2e";
  const auto work = oracle::scratch_dir("acc_e2e");
  const auto t0 = Clock::now();
  c.expect(cli({"--seed", "11", "generate-masks", "--corpus", (fx / "corpus.ndjson").string(), "--count", "8",
                "--out-px", "128", "--out", (work / "masks").string()}) == 0,
           "generate-masks");
  json pairs = json::array();
  for (int i = 0; i < 8; ++i) {
    const std::string id = "img_" + std::to_string(i);
    const std::string image = (fx / "images" / (id + ".png")).string();
    const std::string mask = (work / "masks" / mask_file_name(static_cast<std::size_t>(i), 8)).string();
    const std::string out = (work / (id + "_telea.png")).string();
    c.expect(cli({"inpaint", "--method", "telea", "--image", image, "--mask", mask, "--out", out}) == 0, "inpaint " + id);
    c.expect(cli({"retrieve", "--index", (fx / "index.bin").string(), "--ids", (fx / "ids.json").string(), "--image",
                  image, "--mask", mask, "--k", "1"}) == 0,
             "retrieve " + id);
    pairs.push_back({{"id", id}, {"out", out}, {"gt", image}, {"mask", mask}});
  }
  std::ofstream(work / "pairs.json") << json{{"pairs", pairs}}.dump();
  c.expect(cli({"evaluate", "--pairs", (work / "pairs.json").string(), "--out", (work / "report.json").string()}) == 0,
           "evaluate");
  c.expect(cli({"report", "--in", (work / "report.json").string(), "--out", (work / "table.txt").string(), "--method",
                "Telea"}) == 0,
           "report");
  const double secs = seconds_since(t0);
  c.expect(secs < 10.0, "pipeline took " + fmt(secs) + " s");

  const std::string table = slurp(work / "table.txt");
  const std::string header = table.substr(0, table.find('\n'));
  int columns = 0;
  for (std::size_t b = 0; b < kBucketCount; ++b) columns += header.find(bucket_label(b)) != std::string::npos;
  c.expect(columns == 6, std::to_string(columns) + " bucket columns");
  std::cout << "  pipeline in " << fmt(secs) << " s\n" << table;
  fs::remove_all(work);
  return c;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    Checks (*run)();
  };
  const Criterion criteria[] = {
      {1, "mask generator determinism and 10k runtime", determinism},
      {2, "recipe parameter fidelity", parameter_fidelity},
      {3, "bucket coverage over 10k default masks", bucket_coverage},
      {4, "rasterization brute-force oracle", raster_oracle},
      {5, "fast marching inpainting", fmm},
      {6, "loss suite", losses},
      {7, "metrics", metrics},
      {8, "retrieval", retrieval},
      {9, "end-to-end smoke", end_to_end},
  };
  int failed = 0;
  for (const auto& cr : criteria) {
    Checks result;
    try {
      result = cr.run();
    } catch (const std::exception& e) {
      result.expect(false, std::string("exception: ") + e.what());
    }
    std::cout << (result.ok() ? "PASS" : "FAIL") << "  [" << cr.id << "] " << cr.name
              << (result.ok() ? "" : "  -- " + result.why) << std::endl;
    failed += !result.ok();
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << '\n';
  return failed == 0 ? 0 : 1;
}
