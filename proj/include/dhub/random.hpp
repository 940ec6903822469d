#pragma once

// Portable seeded randomness. The engine is std::mt19937_64, whose output
// sequence is fixed by the C++ standard; every derived draw below is written
// out by hand because the std distributions differ between library vendors.
// Same seed and same call sequence give the same values everywhere.

#include <algorithm>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace dhub {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Top 53 bits scaled into [0, 1).
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [lo, hi] by rejection sampling (no modulo bias).
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

  bool bernoulli(double p) { return uniform01() < p; }

  /// Number of successes in `trials` independent Bernoulli(p) draws.
  int binomial(int trials, double p);

  /// exp(U(log lo, log hi)).
  double log_uniform(double lo, double hi);

  /// Fisher-Yates, walking from the back.
  template <class T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(uniform_int(0, static_cast<std::int64_t>(i) - 1));
      std::swap(items[i - 1], items[j]);
    }
  }

  /// `k` distinct elements in draw order (partial Fisher-Yates from the front).
  template <class T>
  std::vector<T> sample(std::vector<T> items, std::size_t k) {
    k = std::min(k, items.size());
    for (std::size_t i = 0; i < k; ++i) {
      const auto j = static_cast<std::size_t>(
          uniform_int(static_cast<std::int64_t>(i), static_cast<std::int64_t>(items.size()) - 1));
      std::swap(items[i], items[j]);
    }
    items.resize(k);
    return items;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace dhub
