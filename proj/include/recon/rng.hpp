#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace recon {

/// SplitMix64 finalizer. Used to turn structured keys into well-mixed seeds.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/**
 * Seeded random stream.
 *
 * Wraps std::mt19937_64, whose output sequence is fixed by the standard, and
 * implements the derived draws (uniform, exponential, bounded integers) by
 * hand so results are bit-identical across standard library implementations.
 */
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(mix64(seed)) {}

  /// Independent substream keyed by an ordered list of integers.
  static Rng derive(std::uint64_t master, std::initializer_list<std::uint64_t> keys);

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Unit-rate exponential.
  double exponential();

  /// Uniform integer in [0, bound). bound must be positive.
  std::size_t below(std::size_t bound);

  bool coin() { return (engine_() >> 63) != 0; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace recon
