#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

namespace adepinn {

/// Named random streams; each role draws from its own independent sequence.
enum class Stream : std::uint64_t {
  params = 1,
  interior = 2,
  boundary = 3,
  initial = 4,
  test = 5,
  fit = 6,
  misc = 7,
};

/**
 * Counter-based 64-bit generator: the i-th output is a SplitMix64 finalizer
 * applied to key + i * golden. Streams are split by hashing (seed, stream,
 * sub-index) into the key, so any draw is a pure function of its coordinates.
 */
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0, std::uint64_t sub = 0)
      : key_(mix(mix(seed + kGolden) ^ mix(stream * 0x94d049bb133111ebULL + sub))) {}

  CounterRng(std::uint64_t seed, Stream stream, std::uint64_t sub = 0)
      : CounterRng(seed, static_cast<std::uint64_t>(stream), sub) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() { return mix(key_ + (++counter_) * kGolden); }

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box-Muller (two draws per sample).
  double normal() {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  std::uint64_t counter() const { return counter_; }

 private:
  static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

  static constexpr std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace adepinn
