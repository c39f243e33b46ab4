#pragma once

#include <array>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "qdinpaint/image.hpp"

namespace qdi {

// psnr() of identical images.
inline constexpr double kPsnrIdentical = std::numeric_limits<double>::infinity();

// 100 * mean |out - gt| over all elements.
double l1_percent(const RgbImage& out, const RgbImage& gt);

// 100 * mean |out - gt| over the hole pixels' elements only; 0 without holes.
double l1_percent_hole(const RgbImage& out, const RgbImage& gt, const BinaryMask& mask);

// 10 log10(1 / MSE), peak 1.0; kPsnrIdentical when MSE is 0.
double psnr(const RgbImage& out, const RgbImage& gt);

struct SsimParams {
  static constexpr int kWindow = 11;
  static constexpr double kSigma = 1.5;
  static constexpr double kK1 = 0.01;
  static constexpr double kK2 = 0.03;
  static constexpr double kRange = 1.0;
};

// Luma (0.299 R + 0.587 G + 0.114 B) of every pixel, row-major.
std::vector<double> luminance(const RgbImage& img);

// Normalized 11-tap Gaussian, sigma 1.5.
std::array<double, SsimParams::kWindow> ssim_kernel_1d();

// Mean SSIM over all fully contained 11x11 Gaussian windows on luma.
double ssim(const RgbImage& a, const RgbImage& b);

// N x C row-stochastic matrix.
class ProbMatrix {
 public:
  // Throws InvalidDistribution unless every row is finite, non-negative
  // and sums to 1 within 1e-6.
  ProbMatrix(std::size_t rows, std::size_t cols, std::vector<double> values);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::span<const double> row(std::size_t i) const noexcept { return {values_.data() + i * cols_, cols_}; }

  ProbMatrix select_rows(std::span<const std::size_t> rows) const;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> values_;
};

// exp(mean_i KL(p_i || p_bar)), single split, natural log.
double inception_score(const ProbMatrix& p);

struct EvalRecord {
  std::string image_id;
  double hole_ratio = 0.0;
  double l1_percent = 0.0;
  double psnr_db = 0.0;  // kPsnrIdentical allowed
  double ssim = 0.0;
};

inline constexpr std::size_t kBucketCount = 6;
inline constexpr std::array<double, kBucketCount + 1> kBucketEdges{0.01, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6};

// [0.01, 0.1] -> 0, (0.1, 0.2] -> 1, ..., (0.5, 0.6] -> 5; nullopt otherwise.
std::optional<std::size_t> bucket_of(double hole_ratio) noexcept;

std::string bucket_label(std::size_t bucket);

struct Stat {
  double mean = 0.0;
  double std = 0.0;  // population
  std::size_t count = 0;
};

Stat summarize(std::span<const double> values);

struct BucketStats {
  Stat l1_percent;
  Stat psnr;
  Stat ssim;
  std::size_t count = 0;
  std::size_t psnr_infinite = 0;  // identical pairs left out of the PSNR stat
  std::optional<double> iscore;
};

struct BucketReport {
  std::array<BucketStats, kBucketCount> buckets{};
  std::size_t out_of_range = 0;
  std::size_t total = 0;
  std::optional<double> iscore_all;
  std::string l1_region = "image";

  nlohmann::json to_json() const;
  static BucketReport from_json(const nlohmann::json& j);
};

// `probs`, when given, has one row per record in record order.
BucketReport bucketize_report(std::span<const EvalRecord> records, const ProbMatrix* probs = nullptr);

}  // namespace qdi
