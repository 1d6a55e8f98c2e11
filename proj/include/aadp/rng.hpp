#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace aadp {

/// SplitMix64 step; used to derive independent stream seeds from (seed, index).
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

/// Deterministic RNG: mt19937_64 plus hand-rolled distributions, so a given
/// seed reproduces the same stream on every standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform in [0, 1) with 53-bit resolution.
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  /// Standard normal via Box-Muller (cosine branch); two uniforms per draw.
  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
  }

  /// -1 or +1 with equal probability.
  int rademacher() { return uniform() < 0.5 ? -1 : 1; }

  /// Chi-distributed radius with `dof` degrees of freedom.
  double chi(std::size_t dof) {
    double s = 0.0;
    for (std::size_t i = 0; i < dof; ++i) {
      const double z = normal();
      s += z * z;
    }
    return std::sqrt(s);
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace aadp
