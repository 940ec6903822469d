#include "dhub/random.hpp"

#include <cmath>
#include <limits>

namespace dhub {

std::int64_t Rng::uniform_int(std::int64_t lo, std::int64_t hi) {
  if (hi <= lo) return lo;
  const std::uint64_t range = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
  if (range == 0) return static_cast<std::int64_t>(next());  // full 64-bit span
  // Largest multiple of range that fits: reject draws at or above it.
  const std::uint64_t excess = (std::numeric_limits<std::uint64_t>::max() % range + 1) % range;
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - excess;
  std::uint64_t x = next();
  while (x > limit) x = next();
  return lo + static_cast<std::int64_t>(x % range);
}

int Rng::binomial(int trials, double p) {
  int successes = 0;
  for (int i = 0; i < trials; ++i) successes += bernoulli(p) ? 1 : 0;
  return successes;
}

double Rng::log_uniform(double lo, double hi) {
  const double a = std::log(lo);
  const double b = std::log(hi);
  return std::clamp(std::exp(a + uniform01() * (b - a)), lo, hi);
}

}  // namespace dhub
