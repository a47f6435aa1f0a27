#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>

namespace sesop {

/// Seeded 64-bit generator with hand-rolled scalings, so that draws depend
/// only on the engine's standardized output stream.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1), 53 bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on [-1, 1].
  double uniform_pm1() { return 2.0 * uniform01() - 1.0; }

  /// Fills out with independent standard Gaussians (Marsaglia polar pairs).
  void fill_gaussian(std::span<double> out) {
    std::size_t i = 0;
    while (i < out.size()) {
      double u, v, s;
      do {
        u = uniform_pm1();
        v = uniform_pm1();
        s = u * u + v * v;
      } while (s >= 1.0 || s == 0.0);
      const double m = std::sqrt(-2.0 * std::log(s) / s);
      out[i++] = u * m;
      if (i < out.size()) out[i++] = v * m;
    }
  }

  std::uint64_t raw() { return engine_(); }

  /// Derives an independent stream seed (splitmix64 finalizer mix).
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace sesop
