#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace tdcorpus {

/// Seeded generator whose output is identical across standard libraries.
/// std::uniform_int_distribution and std::shuffle are implementation
/// defined, so bounded draws and shuffling are done here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [0, n), n > 0, by rejection sampling.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

  /// Uniform real in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Fisher-Yates shuffle of the first `count` positions: afterwards
  /// v[0..count) is a uniform sample without replacement, in random order.
  template <class T>
  void partial_shuffle(std::vector<T>& v, std::size_t count) {
    const std::size_t n = v.size();
    for (std::size_t i = 0; i < count && i + 1 < n; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(below(n - i));
      std::swap(v[i], v[j]);
    }
  }

  template <class T>
  void shuffle(std::vector<T>& v) {
    partial_shuffle(v, v.size());
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace tdcorpus
