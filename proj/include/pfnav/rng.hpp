#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace pfnav {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer. Used to derive well-separated seeds from
/// structured inputs such as (base_seed, stream, episode).
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

/// Hash a sequence of values into one seed. Order-sensitive.
inline std::uint64_t mix_seed(std::initializer_list<std::uint64_t> parts) {
  std::uint64_t h = 0x8424d6a9c3b5ea1dull;
  for (std::uint64_t p : parts) {
    h = splitmix64(h ^ p);
  }
  return h;
}

inline Rng make_rng(std::initializer_list<std::uint64_t> parts) {
  return Rng(mix_seed(parts));
}

/// N(mean, sigma^2) draw; sigma == 0 returns mean without consuming
/// generator state, so noise-free runs stay bit-reproducible.
inline double gaussian(Rng& rng, double mean, double sigma) {
  if (sigma == 0.0) {
    return mean;
  }
  std::normal_distribution<double> dist(mean, sigma);
  return dist(rng);
}

inline double uniform_real(Rng& rng, double lo, double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  return dist(rng);
}

/// Uniform integer in [0, n).
inline int uniform_index(Rng& rng, int n) {
  std::uniform_int_distribution<int> dist(0, n - 1);
  return dist(rng);
}

inline bool chance(Rng& rng, double prob) {
  if (prob <= 0.0) return false;
  if (prob >= 1.0) return true;
  return uniform_real(rng, 0.0, 1.0) < prob;
}

// Stream tags for deriving independent RNG streams from one base seed.
namespace stream {
inline constexpr std::uint64_t kEnvironment = 0x01;
inline constexpr std::uint64_t kAgent = 0x02;
inline constexpr std::uint64_t kFilter = 0x03;
inline constexpr std::uint64_t kEvolution = 0x04;
inline constexpr std::uint64_t kEvaluation = 0x05;
}  // namespace stream

}  // namespace pfnav
