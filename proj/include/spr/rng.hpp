#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace spr {

// splitmix64 finalizer; full-avalanche mix of a 64-bit word.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Hash-combine up to three stream keys into a derived seed. Used to split one
// master seed into independent per-component / per-trial streams.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t k1 = 0,
                                 std::uint64_t k2 = 0, std::uint64_t k3 = 0) {
  std::uint64_t h = mix64(master ^ 0xa0761d6478bd642fULL);
  h = mix64(h ^ k1);
  h = mix64(h ^ k2);
  h = mix64(h ^ k3);
  return h;
}

// Seedable, splittable random stream. mt19937_64 supplies the bits; uniform
// and normal variates are generated explicitly (not via std:: distributions)
// so that a given seed yields the same sequence on every standard library.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : seed_(seed), engine_(mix64(seed)) {}

  // Child stream keyed off this stream's seed, independent of how many
  // variates the parent has consumed.
  RandomStream derive(std::uint64_t k1, std::uint64_t k2 = 0,
                      std::uint64_t k3 = 0) const {
    return RandomStream(derive_seed(seed_, k1, k2, k3));
  }

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, bound); rejection sampling avoids modulo bias.
  std::uint64_t uniform_below(std::uint64_t bound) {
    const std::uint64_t limit = bound * (UINT64_MAX / bound);
    std::uint64_t x;
    do {
      x = next_u64();
    } while (x >= limit);
    return x % bound;
  }

  // Standard normal via Box-Muller; the spare variate is cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    // u1 in (0, 1] so the log is finite.
    const double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace spr
