#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace dirrep {

namespace detail {

// SplitMix64 finalizer, used only to spread (seed, stream_id) into
// well-separated engine seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace detail

// Deterministic stream of standard normal draws.
//
// Reproducibility contract: the engine is std::mt19937_64 (its output is
// pinned by the C++ standard), seeded with
//   splitmix64(splitmix64(seed) + stream_id),
// and draws come from the Box-Muller transform on 53-bit uniforms
//   u1 = ((x >> 11) + 1) * 2^-53   in (0, 1]
//   u2 =  (y >> 11)      * 2^-53   in [0, 1)
//   z0 = sqrt(-2 ln u1) * cos(2 pi u2),   z1 = sqrt(-2 ln u1) * sin(2 pi u2).
// Identical (seed, stream_id) therefore reproduce the same sequence on any
// conforming platform; distinct stream_ids give streams that are independent
// for Monte Carlo purposes. A stream is a single-owner object: parallel
// callers take one stream per worker (stream_id = worker index).
class NormalStream {
 public:
  NormalStream(std::uint64_t seed, std::uint64_t stream_id)
      : engine_(detail::splitmix64(detail::splitmix64(seed) + stream_id)) {}

  double next() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    constexpr double two_pi = 6.2831853071795864769252867665590;
    const double u1 = static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
    const double u2 = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = two_pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace dirrep
