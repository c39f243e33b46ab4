#include <cmath>

#include "qdinpaint/simd/kernels.hpp"

namespace qdi::simd {

namespace {

double dot_f64(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double sum_abs_diff(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += std::abs(a[i] - b[i]);
  return acc;
}

double sum_sq_diff(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

double sum_abs_diff_gated(const double* a, const double* b, const double* g, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += std::abs(g[i] * (a[i] - b[i]));
  return acc;
}

constexpr Kernels kScalar{"scalar", dot_f64, sum_abs_diff, sum_sq_diff, sum_abs_diff_gated};

}  // namespace

const Kernels& scalar_kernels() noexcept { return kScalar; }

}  // namespace qdi::simd
