#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace ttc::rng {

// Seeded runs must reproduce bit-for-bit, so distribution shaping is done by
// hand instead of through the implementation-defined <random> distributions.

using Engine = std::mt19937_64;

inline Engine make_engine(std::uint64_t seed) { return Engine(seed); }

// Unbiased integer in [0, bound) via rejection.
inline std::uint64_t next_below(Engine& g, std::uint64_t bound) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t x;
  do {
    x = g();
  } while (x >= limit);
  return x % bound;
}

inline double uniform(Engine& g) {  // [0, 1)
  return (g() >> 11) * 0x1.0p-53;
}

inline double normal(Engine& g) {  // Box-Muller, one value per call pair
  double u1 = uniform(g);
  while (u1 <= 0.0) u1 = uniform(g);
  const double u2 = uniform(g);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
}

template <typename T>
void shuffle(std::vector<T>& v, Engine& g) {
  for (std::size_t i = v.size(); i > 1; --i)
    std::swap(v[i - 1], v[next_below(g, i)]);
}

// First k of a shuffled 0-based index range [0, n).
std::vector<std::int64_t> sample_indices(std::int64_t n, std::int64_t k,
                                         Engine& g);

}  // namespace ttc::rng
