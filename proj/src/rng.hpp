#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace efl {

// 64-bit FNV-1a over the little-endian bytes of (seed, index). This is the
// documented day-seed derivation, so alternate implementations can reproduce
// generated series exactly.
inline std::uint64_t fnv1a64_pair(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  const auto mix = [&h](std::uint64_t value) {
    for (int i = 0; i < 8; ++i) {
      h ^= (value >> (8 * i)) & 0xffULL;
      h *= 0x100000001b3ULL;
    }
  };
  mix(seed);
  mix(index);
  return h;
}

// mt19937_64 with hand-rolled uniform/normal draws. std::normal_distribution
// is implementation-defined, which would break byte-identical output across
// standard libraries; Box-Muller is pinned here instead.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // uniform in [0, 1) with 53-bit resolution
  double uniform01() {
    return double(engine_() >> 11) * 0x1.0p-53;
  }

  bool bernoulli(double p) { return uniform01() < p; }

  double normal(double mean, double stddev) {
    if (!have_spare_) {
      double u = 0.0;
      do {
        u = uniform01();
      } while (u <= 0.0);
      const double v = uniform01();
      const double r = std::sqrt(-2.0 * std::log(u));
      cached_ = r * std::sin(2.0 * M_PI * v);
      have_spare_ = true;
      return mean + stddev * r * std::cos(2.0 * M_PI * v);
    }
    have_spare_ = false;
    return mean + stddev * cached_;
  }

private:
  std::mt19937_64 engine_;
  double cached_ = 0.0;
  bool have_spare_ = false;
};

} // namespace efl
