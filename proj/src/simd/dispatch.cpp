#include <cstdlib>
#include <string_view>

#include "qdinpaint/simd/kernels.hpp"

namespace qdi::simd {

#if !defined(__x86_64__) && !defined(_M_X64) && !defined(__aarch64__) && !defined(_M_ARM64)
const Kernels* avx2_kernels() noexcept { return nullptr; }
const Kernels* neon_kernels() noexcept { return nullptr; }
#endif

std::vector<const Kernels*> available_kernels() {
  std::vector<const Kernels*> out{&scalar_kernels()};
  if (const Kernels* k = avx2_kernels()) out.push_back(k);
  if (const Kernels* k = neon_kernels()) out.push_back(k);
  return out;
}

namespace {

const Kernels& select() noexcept {
  if (const char* env = std::getenv("QDI_SIMD")) {
    const std::string_view want(env);
    for (const Kernels* k : available_kernels()) {
      if (k->name == want) return *k;
    }
  }
  if (const Kernels* k = avx2_kernels()) return *k;
  if (const Kernels* k = neon_kernels()) return *k;
  return scalar_kernels();
}

}  // namespace

const Kernels& active() noexcept {
  static const Kernels& chosen = select();
  return chosen;
}

}  // namespace qdi::simd
