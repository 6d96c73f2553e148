#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace gnd {

// Salts that keep differently-purposed streams apart.
enum class StreamKind : std::uint64_t {
  cost_share = 1,
  selection = 2,
  perturbation = 3,
  round_pick = 4,
  sample_pairs = 5,
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Seed for a stream keyed by the master seed and a tuple of coordinates.
// Streams are independent of the order in which they are requested.
inline std::uint64_t stream_seed(std::uint64_t master, StreamKind kind,
                                 std::initializer_list<std::uint64_t> keys) {
  std::uint64_t h = splitmix64(master ^ splitmix64(static_cast<std::uint64_t>(kind)));
  for (std::uint64_t k : keys) h = splitmix64(h ^ splitmix64(k + 0x632be59bd9b4e019ULL));
  return h;
}

inline std::mt19937_64 make_stream(std::uint64_t master, StreamKind kind,
                                   std::initializer_list<std::uint64_t> keys) {
  return std::mt19937_64(stream_seed(master, kind, keys));
}

// Uniform double in [0, 1) from the top 53 bits; identical on every platform,
// unlike std::uniform_real_distribution.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform integer in [0, n) by rejection; platform independent.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % n;
}

}  // namespace gnd
