#include "qdinpaint/rng.hpp"

#include <cmath>
#include <numbers>

namespace qdi {

double Rng::uniform(double lo, double hi) {
  const double v = lo + (hi - lo) * uniform01();
  return v > hi ? hi : v;
}

std::uint64_t Rng::below(std::uint64_t n) {
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
  for (;;) {
    const std::uint64_t v = engine_();
    if (v < limit) return v % n;
  }
}

double Rng::normal(double mean, double stddev) {
  // 1 - u keeps the log argument in (0, 1].
  const double u1 = 1.0 - uniform01();
  const double u2 = uniform01();
  const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  return mean + stddev * z;
}

}  // namespace qdi
