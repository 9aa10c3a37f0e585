#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace essh {

// splitmix64: tiny, seedable, platform-stable.  Used instead of std::mt19937
// + std::normal_distribution because the standard library's normal
// distribution is not bit-reproducible across implementations, and disorder
// realizations must be.
class SplitMix64 {
 public:
  explicit SplitMix64(uint64_t seed) : state_(seed) {}

  uint64_t next_u64() {
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // uniform in (0, 1]
  double next_unit() {
    return (next_u64() >> 11) * 0x1.0p-53 + 0x1.0p-54;
  }

  // standard normal via Box-Muller (cosine branch; one draw per two uniforms)
  double next_normal() {
    const double u1 = next_unit();
    const double u2 = next_unit();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  uint64_t state_;
};

inline uint64_t mix_u64(uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Per-sample seed derivation: hash(master, sigma index, sample index).
inline uint64_t derive_seed(uint64_t master, uint64_t a, uint64_t b) {
  uint64_t h = mix_u64(master + 0x9e3779b97f4a7c15ULL);
  h = mix_u64(h ^ (a + 0x9e3779b97f4a7c15ULL));
  h = mix_u64(h ^ (b + 0x9e3779b97f4a7c15ULL));
  return h;
}

}  // namespace essh
