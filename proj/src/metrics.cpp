#include "qdinpaint/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "qdinpaint/error.hpp"
#include "qdinpaint/simd/kernels.hpp"

namespace qdi {

double l1_percent(const RgbImage& out, const RgbImage& gt) {
  require_same_size(out, gt, "l1_percent");
  if (out.empty()) return 0.0;
  const double sum = simd::active().sum_abs_diff(out.data().data(), gt.data().data(), out.size());
  return 100.0 * sum / static_cast<double>(out.size());
}

double l1_percent_hole(const RgbImage& out, const RgbImage& gt, const BinaryMask& mask) {
  require_same_size(out, gt, "l1_percent_hole");
  require_same_size(out, mask, "l1_percent_hole mask");
  double sum = 0.0;
  std::size_t n = 0;
  for (int y = 0; y < out.height(); ++y) {
    for (int x = 0; x < out.width(); ++x) {
      if (!mask.is_hole(x, y)) continue;
      for (int c = 0; c < 3; ++c) sum += std::abs(out.at(x, y, c) - gt.at(x, y, c));
      n += 3;
    }
  }
  return n == 0 ? 0.0 : 100.0 * sum / static_cast<double>(n);
}

double psnr(const RgbImage& out, const RgbImage& gt) {
  require_same_size(out, gt, "psnr");
  if (out.empty()) return kPsnrIdentical;
  const double mse = simd::active().sum_sq_diff(out.data().data(), gt.data().data(), out.size()) /
                     static_cast<double>(out.size());
  if (mse == 0.0) return kPsnrIdentical;
  return 10.0 * std::log10(1.0 / mse);
}

std::vector<double> luminance(const RgbImage& img) {
  std::vector<double> y(img.pixel_count());
  const auto d = img.data();
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = 0.299 * d[3 * i] + 0.587 * d[3 * i + 1] + 0.114 * d[3 * i + 2];
  return y;
}

std::array<double, SsimParams::kWindow> ssim_kernel_1d() {
  std::array<double, SsimParams::kWindow> k{};
  constexpr int half = SsimParams::kWindow / 2;
  double sum = 0.0;
  for (int i = 0; i < SsimParams::kWindow; ++i) {
    const double d = i - half;
    k[static_cast<std::size_t>(i)] = std::exp(-(d * d) / (2.0 * SsimParams::kSigma * SsimParams::kSigma));
    sum += k[static_cast<std::size_t>(i)];
  }
  for (double& v : k) v /= sum;
  return k;
}

namespace {

// Separable "valid" Gaussian filter: (h - 10) x (w - 10) output.
std::vector<double> filter_valid(const std::vector<double>& src, int w, int h,
                                 const std::array<double, SsimParams::kWindow>& k) {
  constexpr int n = SsimParams::kWindow;
  const int ow = w - n + 1;
  const int oh = h - n + 1;
  std::vector<double> rows(static_cast<std::size_t>(h) * ow);
  for (int y = 0; y < h; ++y) {
    const double* line = src.data() + static_cast<std::size_t>(y) * w;
    for (int x = 0; x < ow; ++x) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += k[static_cast<std::size_t>(i)] * line[x + i];
      rows[static_cast<std::size_t>(y) * ow + x] = s;
    }
  }
  std::vector<double> out(static_cast<std::size_t>(oh) * ow);
  for (int y = 0; y < oh; ++y) {
    for (int x = 0; x < ow; ++x) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += k[static_cast<std::size_t>(i)] * rows[static_cast<std::size_t>(y + i) * ow + x];
      out[static_cast<std::size_t>(y) * ow + x] = s;
    }
  }
  return out;
}

}  // namespace

double ssim(const RgbImage& a, const RgbImage& b) {
  require_same_size(a, b, "ssim");
  if (std::min(a.width(), a.height()) < SsimParams::kWindow) {
    throw Error(ErrorCode::TooSmall, "ssim needs images of at least 11x11");
  }
  const int w = a.width();
  const int h = a.height();
  const auto x = luminance(a);
  const auto y = luminance(b);
  std::vector<double> xx(x.size()), yy(x.size()), xy(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    xx[i] = x[i] * x[i];
    yy[i] = y[i] * y[i];
    xy[i] = x[i] * y[i];
  }
  const auto k = ssim_kernel_1d();
  const auto mu_x = filter_valid(x, w, h, k);
  const auto mu_y = filter_valid(y, w, h, k);
  const auto e_xx = filter_valid(xx, w, h, k);
  const auto e_yy = filter_valid(yy, w, h, k);
  const auto e_xy = filter_valid(xy, w, h, k);

  constexpr double c1 = (SsimParams::kK1 * SsimParams::kRange) * (SsimParams::kK1 * SsimParams::kRange);
  constexpr double c2 = (SsimParams::kK2 * SsimParams::kRange) * (SsimParams::kK2 * SsimParams::kRange);
  double total = 0.0;
  for (std::size_t i = 0; i < mu_x.size(); ++i) {
    const double mx = mu_x[i];
    const double my = mu_y[i];
    const double vx = e_xx[i] - mx * mx;
    const double vy = e_yy[i] - my * my;
    const double cov = e_xy[i] - mx * my;
    total += ((2.0 * mx * my + c1) * (2.0 * cov + c2)) / ((mx * mx + my * my + c1) * (vx + vy + c2));
  }
  return total / static_cast<double>(mu_x.size());
}

ProbMatrix::ProbMatrix(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  if (rows_ == 0 || cols_ == 0 || values_.size() != rows_ * cols_) {
    throw Error(ErrorCode::InvalidDistribution, "probability matrix must be a non-empty N x C table");
  }
  for (std::size_t i = 0; i < rows_; ++i) {
    double sum = 0.0;
    for (double p : row(i)) {
      if (!std::isfinite(p) || p < 0.0) {
        throw Error(ErrorCode::InvalidDistribution, "row " + std::to_string(i) + " has a negative or non-finite entry");
      }
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-6) {
      throw Error(ErrorCode::InvalidDistribution, "row " + std::to_string(i) + " sums to " + std::to_string(sum));
    }
  }
}

ProbMatrix ProbMatrix::select_rows(std::span<const std::size_t> rows) const {
  std::vector<double> v;
  v.reserve(rows.size() * cols_);
  for (std::size_t r : rows) v.insert(v.end(), row(r).begin(), row(r).end());
  return ProbMatrix(rows.size(), cols_, std::move(v));
}

double inception_score(const ProbMatrix& p) {
  // Marginal as first row plus mean deviation: identical rows give it exactly.
  const auto first = p.row(0);
  std::vector<double> marginal(p.cols(), 0.0);
  for (std::size_t i = 1; i < p.rows(); ++i) {
    for (std::size_t c = 0; c < p.cols(); ++c) marginal[c] += p.row(i)[c] - first[c];
  }
  for (std::size_t c = 0; c < p.cols(); ++c) marginal[c] = first[c] + marginal[c] / static_cast<double>(p.rows());

  double kl_sum = 0.0;
  for (std::size_t i = 0; i < p.rows(); ++i) {
    double kl = 0.0;
    for (std::size_t c = 0; c < p.cols(); ++c) {
      const double pc = p.row(i)[c];
      if (pc > 0.0) kl += pc * (std::log(pc) - std::log(marginal[c]));
    }
    kl_sum += kl;
  }
  return std::exp(kl_sum / static_cast<double>(p.rows()));
}

std::optional<std::size_t> bucket_of(double r) noexcept {
  if (!(r >= kBucketEdges[0]) || r > kBucketEdges[kBucketCount]) return std::nullopt;
  if (r <= kBucketEdges[1]) return 0;
  for (std::size_t j = 1; j < kBucketCount; ++j) {
    if (r > kBucketEdges[j] && r <= kBucketEdges[j + 1]) return j;
  }
  return std::nullopt;
}

std::string bucket_label(std::size_t bucket) {
  char buf[32];
  if (bucket == 0) {
    std::snprintf(buf, sizeof buf, "[%.2f, %.1f]", kBucketEdges[0], kBucketEdges[1]);
  } else {
    std::snprintf(buf, sizeof buf, "(%.1f, %.1f]", kBucketEdges[bucket], kBucketEdges[bucket + 1]);
  }
  return buf;
}

Stat summarize(std::span<const double> values) {
  Stat s;
  s.count = values.size();
  if (values.empty()) return s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  double sq = 0.0;
  for (double v : values) sq += (v - s.mean) * (v - s.mean);
  s.std = std::sqrt(sq / static_cast<double>(values.size()));
  return s;
}

BucketReport bucketize_report(std::span<const EvalRecord> records, const ProbMatrix* probs) {
  if (probs && probs->rows() != records.size()) {
    throw Error(ErrorCode::DimensionMismatch, "probability rows " + std::to_string(probs->rows()) + " vs records " +
                                                  std::to_string(records.size()));
  }
  BucketReport rep;
  rep.total = records.size();
  std::array<std::vector<double>, kBucketCount> l1, ps, ss;
  std::array<std::vector<std::size_t>, kBucketCount> members;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const EvalRecord& r = records[i];
    const auto b = bucket_of(r.hole_ratio);
    if (!b) {
      ++rep.out_of_range;
      continue;
    }
    BucketStats& s = rep.buckets[*b];
    ++s.count;
    members[*b].push_back(i);
    l1[*b].push_back(r.l1_percent);
    ss[*b].push_back(r.ssim);
    if (std::isinf(r.psnr_db)) {
      ++s.psnr_infinite;
    } else {
      ps[*b].push_back(r.psnr_db);
    }
  }
  for (std::size_t b = 0; b < kBucketCount; ++b) {
    BucketStats& s = rep.buckets[b];
    s.l1_percent = summarize(l1[b]);
    s.psnr = summarize(ps[b]);
    s.ssim = summarize(ss[b]);
    if (probs && !members[b].empty()) s.iscore = inception_score(probs->select_rows(members[b]));
  }
  if (probs && probs->rows() > 0) rep.iscore_all = inception_score(*probs);
  return rep;
}

namespace {

nlohmann::json stat_json(const Stat& s) { return {{"mean", s.mean}, {"std", s.std}, {"count", s.count}}; }

Stat stat_from(const nlohmann::json& j) {
  return {j.at("mean").get<double>(), j.at("std").get<double>(), j.at("count").get<std::size_t>()};
}

}  // namespace

nlohmann::json BucketReport::to_json() const {
  nlohmann::json bs = nlohmann::json::array();
  for (std::size_t b = 0; b < kBucketCount; ++b) {
    const BucketStats& s = buckets[b];
    nlohmann::json j = {{"label", bucket_label(b)},
                        {"lo", kBucketEdges[b]},
                        {"hi", kBucketEdges[b + 1]},
                        {"count", s.count},
                        {"l1_percent", stat_json(s.l1_percent)},
                        {"psnr", stat_json(s.psnr)},
                        {"psnr_infinite", s.psnr_infinite},
                        {"ssim", stat_json(s.ssim)},
                        {"iscore", s.iscore ? nlohmann::json(*s.iscore) : nlohmann::json(nullptr)}};
    bs.push_back(std::move(j));
  }
  return {{"buckets", std::move(bs)},
          {"out_of_range", out_of_range},
          {"total", total},
          {"l1_region", l1_region},
          {"iscore_all", iscore_all ? nlohmann::json(*iscore_all) : nlohmann::json(nullptr)}};
}

BucketReport BucketReport::from_json(const nlohmann::json& j) {
  BucketReport r;
  try {
    const auto& bs = j.at("buckets");
    if (!bs.is_array() || bs.size() != kBucketCount) {
      throw Error(ErrorCode::InvalidArgument, "report must have exactly 6 buckets");
    }
    for (std::size_t b = 0; b < kBucketCount; ++b) {
      const auto& src = bs[b];
      BucketStats& s = r.buckets[b];
      s.count = src.at("count").get<std::size_t>();
      s.l1_percent = stat_from(src.at("l1_percent"));
      s.psnr = stat_from(src.at("psnr"));
      s.ssim = stat_from(src.at("ssim"));
      s.psnr_infinite = src.value("psnr_infinite", std::size_t{0});
      if (auto it = src.find("iscore"); it != src.end() && it->is_number()) s.iscore = it->get<double>();
    }
    r.out_of_range = j.at("out_of_range").get<std::size_t>();
    r.total = j.at("total").get<std::size_t>();
    r.l1_region = j.value("l1_region", std::string("image"));
    if (auto it = j.find("iscore_all"); it != j.end() && it->is_number()) r.iscore_all = it->get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("malformed report: ") + e.what());
  }
  return r;
}

}  // namespace qdi
