#pragma once

#include <cstdint>

namespace impsel {

// Deterministic random stream (xoshiro256++ seeded through splitmix64).
// Streams are derived from (seed, stream-index) so independent trials can be
// reproduced individually; the same (seed, index) always yields the same
// sequence on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) { seed_state(seed, 0); }
  Rng(std::uint64_t seed, std::uint64_t stream) { seed_state(seed, stream); }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform on the half-open interval [0, 1). Never returns 1, so a sampled
  // priority never ties a fixed priority of exactly 1.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform on {0, ..., bound-1}, unbiased by rejection.
  std::uint64_t next_below(std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x;
    do {
      x = next_u64();
    } while (x >= limit);
    return x % bound;
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  static std::uint64_t splitmix(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  void seed_state(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t sm = seed;
    std::uint64_t a = splitmix(sm);
    sm = a ^ (stream * 0xD1B54A32D192ED03ULL + 0x9E3779B97F4A7C15ULL);
    for (auto& w : s_) w = splitmix(sm);
  }

  std::uint64_t s_[4];
};

}  // namespace impsel
