#ifndef KSAT_RNG_HPP
#define KSAT_RNG_HPP

#include <cstdint>

namespace ksat {

// Seedable, splittable counter-based generator (splitmix64 core). Every
// stochastic operation in this library takes an explicit seed or an Rng
// stream so runs replay bit-exactly across platforms; std:: distributions
// are avoided for the same reason.
class Rng {
 public:
  Rng() : state_(0x9e3779b97f4a7c15ull) {}
  explicit Rng(std::uint64_t seed) : state_(mix(seed ^ 0x9e3779b97f4a7c15ull)) {}

  // Derives an independent stream; (seed, tag) pairs map to distinct streams.
  Rng split(std::uint64_t tag) const { return Rng(mix(state_ + 0x632be59bd9b4e019ull * (tag + 1))); }

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ull;
    return mix(state_);
  }

  // Unbiased uniform draw in [0, bound) by rejection (Lemire-style).
  std::uint64_t next_below(std::uint64_t bound) {
    if (bound <= 1) return 0;
    std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      std::uint64_t r = next_u64();
      if (r >= threshold) return r % bound;
    }
  }

  std::uint32_t next_u32() { return static_cast<std::uint32_t>(next_u64() >> 32); }

  bool next_bool() { return (next_u64() >> 63) != 0; }

  // Uniform double in [0, 1) with 53 random bits.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return next_double() < p; }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  std::uint64_t state_;
};

}  // namespace ksat

#endif
