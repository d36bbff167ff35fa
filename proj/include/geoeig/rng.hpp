#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace geoeig {

// All randomness flows through std::mt19937_64, whose state transition and
// output function are fixed by the C++ standard (and match the reference
// MT19937-64 by Matsumoto and Nishimura), so streams reproduce bit-exactly in
// any language. Doubles are formed from the top 53 bits, never through
// std::uniform_real_distribution, whose algorithm is implementation-defined.
using rng_engine = std::mt19937_64;

// Uniform double in [0, 1): (v >> 11) * 2^-53.
inline double uniform01(rng_engine& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(rng_engine& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

// Uniform integer in [0, bound) by rejection on the top bits; bound > 0.
inline std::uint64_t uniform_index(rng_engine& rng, std::uint64_t bound) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t v = rng();
  while (v >= limit) v = rng();
  return v % bound;
}

// SplitMix64 finalizer (Steele, Lea, Flood 2014).
constexpr std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Fixed substream offsets below one root seed.
enum class stream : std::uint64_t {
  graph = 0,
  initial_vector = 1,
  instance = 2,
};

// Seed of substream (purpose, index) under `root`:
// splitmix64(root + splitmix64((purpose << 32) + index)).
constexpr std::uint64_t substream_seed(std::uint64_t root, stream purpose,
                                       std::uint64_t index) {
  return splitmix64(root +
                    splitmix64((static_cast<std::uint64_t>(purpose) << 32) + index));
}

inline rng_engine make_rng(std::uint64_t seed) { return rng_engine(seed); }

// Initial vector with entries i.i.d. uniform on [0, 1].
inline std::vector<double> random_unit_interval(std::size_t n, rng_engine& rng) {
  std::vector<double> x(n);
  for (auto& v : x) v = uniform01(rng);
  return x;
}

}  // namespace geoeig
