#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

namespace qdi::simd {

// Reduction kernels behind retrieval, losses and metrics. Every table
// computes the same sums; vector variants differ from the scalar reference
// only in summation order (all accumulation is in double).
struct Kernels {
  std::string_view name;
  double (*dot_f64)(const double* a, const double* b, std::size_t n);
  // sum |a_i - b_i|
  double (*sum_abs_diff)(const double* a, const double* b, std::size_t n);
  // sum (a_i - b_i)^2
  double (*sum_sq_diff)(const double* a, const double* b, std::size_t n);
  // sum |g_i * (a_i - b_i)|
  double (*sum_abs_diff_gated)(const double* a, const double* b, const double* g, std::size_t n);
};

const Kernels& scalar_kernels() noexcept;

// nullptr when the variant is not compiled in or the CPU lacks the feature.
const Kernels* avx2_kernels() noexcept;
const Kernels* neon_kernels() noexcept;

// Every table usable on this machine, scalar first.
std::vector<const Kernels*> available_kernels();

// Best available table, chosen once. QDI_SIMD=scalar|avx2|neon overrides.
const Kernels& active() noexcept;

}  // namespace qdi::simd
