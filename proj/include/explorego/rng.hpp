#pragma once

#include <cstdint>
#include <string_view>

namespace explorego {

/// Deterministic xoshiro256++ stream, seeded through splitmix64.
/// All randomness in the project flows through explicitly passed Rng
/// instances; no global RNG state exists anywhere.
class Rng {
 public:
  explicit Rng(uint64_t seed) {
    // splitmix64 expansion of the seed into the four state words.
    uint64_t x = seed;
    for (auto& word : state_) word = splitmix64(x);
  }

  uint64_t next_u64() {
    const uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform double in [0, 1), 53 bits of entropy.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform float in [0, 1).
  float next_float() { return static_cast<float>(next_u64() >> 40) * 0x1.0p-24f; }

  /// Unbiased uniform integer in [0, n). n == 1 consumes no stream state,
  /// so degenerate draws (e.g. a {0..0} range) leave seeded runs unchanged.
  uint64_t uniform_int(uint64_t n) {
    if (n <= 1) return 0;
    const uint64_t bound = ~uint64_t{0} - (~uint64_t{0} % n);
    uint64_t v = next_u64();
    while (v >= bound) v = next_u64();
    return v % n;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  static uint64_t splitmix64(uint64_t& x) {
    uint64_t z = (x += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

 private:
  static uint64_t rotl(uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }

  uint64_t state_[4];
};

/// Derives an independent stream seed from (master, purpose tag, index).
/// Streams for different tags or indices are decorrelated by splitmix64
/// winding over an FNV-1a hash of the tag.
inline uint64_t derive_seed(uint64_t master, std::string_view tag, uint64_t index) {
  uint64_t h = 0xcbf29ce484222325ull;
  for (char c : tag) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ull;
  }
  uint64_t x = master;
  uint64_t s = Rng::splitmix64(x);
  x ^= h;
  s ^= Rng::splitmix64(x);
  x ^= index;
  s ^= Rng::splitmix64(x);
  return s;
}

}  // namespace explorego
