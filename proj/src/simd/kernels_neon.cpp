// AArch64 NEON kernels (Advanced SIMD is mandatory on AArch64).

#include <arm_neon.h>

#include "qdinpaint/simd/kernels.hpp"

namespace qdi::simd {

namespace {

double dot_f64(const double* a, const double* b, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) acc = vfmaq_f64(acc, vld1q_f64(a + i), vld1q_f64(b + i));
  double s = vaddvq_f64(acc);
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

double sum_abs_diff(const double* a, const double* b, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) acc = vaddq_f64(acc, vabdq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
  double s = vaddvq_f64(acc);
  for (; i < n; ++i) {
    const double d = a[i] - b[i];
    s += d < 0.0 ? -d : d;
  }
  return s;
}

double sum_sq_diff(const double* a, const double* b, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t d = vsubq_f64(vld1q_f64(a + i), vld1q_f64(b + i));
    acc = vfmaq_f64(acc, d, d);
  }
  double s = vaddvq_f64(acc);
  for (; i < n; ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

double sum_abs_diff_gated(const double* a, const double* b, const double* g, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t d = vsubq_f64(vld1q_f64(a + i), vld1q_f64(b + i));
    acc = vaddq_f64(acc, vabsq_f64(vmulq_f64(vld1q_f64(g + i), d)));
  }
  double s = vaddvq_f64(acc);
  for (; i < n; ++i) {
    const double v = g[i] * (a[i] - b[i]);
    s += v < 0.0 ? -v : v;
  }
  return s;
}

constexpr Kernels kNeon{"neon", dot_f64, sum_abs_diff, sum_sq_diff, sum_abs_diff_gated};

}  // namespace

const Kernels* neon_kernels() noexcept { return &kNeon; }

const Kernels* avx2_kernels() noexcept { return nullptr; }

}  // namespace qdi::simd
