#pragma once

#include <cmath>
#include <cstdint>

#include "equidyn/scalar.hpp"

namespace equidyn {

/// Deterministic per-sample random stream. Each (seed, index) pair opens an
/// independent splitmix64 sequence, so sample i draws the same values no
/// matter which thread runs it or in what order.
class SampleRng {
 public:
  SampleRng(std::uint64_t seed, std::uint64_t index)
      : state_(mix(mix(seed + 0x9e3779b97f4a7c15ull) ^ mix(index + 0xbf58476d1ce4e5b9ull))) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ull;
    return mix(state_);
  }

  // Uniform in (0, 1]; never returns 0 so log() is safe.
  double uniform01() {
    return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
  }

  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = uniform01();
    const double u2 = uniform01();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 6.283185307179586476925286766559 * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
  }

  /// Vector of independent standard complex Gaussians; after projective
  /// normalization this samples the Fubini-Study uniform measure on P^{n-1}.
  CVector gaussian_vector(int n) {
    CVector v(n);
    for (int i = 0; i < n; ++i) v[i] = Complex(gaussian(), gaussian());
    return v;
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ull;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebull;
    z ^= z >> 31;
    return z;
  }

  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace equidyn
