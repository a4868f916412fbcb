#ifndef LOOPWORKS_RNG_HPP
#define LOOPWORKS_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace loopworks {

using Rng = std::mt19937_64;

// Seed for bare CLI invocations; any run can override it with --seed.
inline constexpr std::uint64_t kDefaultSeed = 0x6c6f6f70776f726bULL;

// SplitMix64 step; used only to expand seeds, never as a sampling engine.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Stream derivation contract: (master_seed, stream_index) determines the
// generator state, so replicated runs are reproducible and distinct streams
// are statistically independent.
inline Rng derive_stream(std::uint64_t master_seed, std::uint64_t stream_index) {
  std::uint64_t s = master_seed;
  std::uint64_t a = splitmix64(s);
  s ^= stream_index * 0xda942042e4dd58b5ULL;
  std::uint64_t b = splitmix64(s);
  std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                    static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
  return Rng(seq);
}

// Uniform double in [0, 1) with 53 random bits. Hand-rolled instead of
// std::uniform_real_distribution so the draw sequence is pinned by the
// engine alone.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double sample_exponential(Rng& rng, double rate) {
  return -std::log1p(-uniform01(rng)) / rate;
}

// Knuth product-of-uniforms; fine for the small intensities used here.
inline std::int64_t sample_poisson(Rng& rng, double lambda) {
  if (lambda <= 0.0) return 0;
  const double limit = std::exp(-lambda);
  std::int64_t k = 0;
  double p = 1.0;
  for (;;) {
    p *= uniform01(rng);
    if (p <= limit) return k;
    ++k;
  }
}

}  // namespace loopworks

#endif
