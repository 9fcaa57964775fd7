#pragma once
#include <complex>
#include <cstdint>
#include <cmath>

namespace henon {

// SplitMix64. Used instead of <random> distributions so that sampled
// test/CSV data is bit-identical across platforms and standard libraries.
struct SplitMix64 {
  std::uint64_t state;

  explicit SplitMix64(std::uint64_t seed = 0) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // uniform in [0, 1)
  double uniform01() { return double(next() >> 11) * 0x1.0p-53; }

  // uniform in [lo, hi)
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // uniform on the closed disc |z| <= radius (area measure)
  std::complex<double> disc(double radius) {
    double r = radius * std::sqrt(uniform01());
    double phi = 2.0 * M_PI * uniform01();
    return std::polar(r, phi);
  }

  // uniform in the square [-half, half]^2
  std::complex<double> square(double half) {
    return {uniform(-half, half), uniform(-half, half)};
  }
};

}  // namespace henon
