#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <numbers>

namespace pilotseq {

/// SplitMix64 used as a counter-based generator: the i-th output of a stream
/// is mix(key + (i + 1) * 0x9E3779B97F4A7C15), so any (key, counter) pair can be
/// produced without running the stream from the start. Outputs are identical
/// on every platform with IEEE doubles; normals use Box-Muller and depend on
/// the platform libm for log/cos/sin.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key, std::uint64_t counter = 0)
      : key_(key), counter_(counter) {}

  static constexpr std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Derives an independent stream key from a seed and a list of stream ids
  /// (e.g. grid index and trial index).
  static std::uint64_t deriveKey(std::uint64_t seed, std::initializer_list<std::uint64_t> ids) {
    std::uint64_t k = mix(seed ^ 0x6A09E667F3BCC909ULL);
    for (auto id : ids) k = mix(k + kGolden * (id + 1));
    return k;
  }

  std::uint64_t next() { return mix(key_ + kGolden * ++counter_); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double normal() {
    if (hasSpare_) {
      hasSpare_ = false;
      return spare_;
    }
    // 1 - u lies in (0, 1], keeping log finite.
    const double r = std::sqrt(-2.0 * std::log(1.0 - uniform()));
    const double theta = 2.0 * std::numbers::pi * uniform();
    spare_ = r * std::sin(theta);
    hasSpare_ = true;
    return r * std::cos(theta);
  }

  /// Circularly-symmetric complex Gaussian CN(0, variance).
  std::complex<double> complexNormal(double variance = 1.0) {
    const double scale = std::sqrt(variance / 2.0);
    const double re = normal();
    const double im = normal();
    return {scale * re, scale * im};
  }

  std::uint64_t counter() const { return counter_; }

 private:
  static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
  std::uint64_t key_;
  std::uint64_t counter_;
  double spare_ = 0.0;
  bool hasSpare_ = false;
};

}  // namespace pilotseq
