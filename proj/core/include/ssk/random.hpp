#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>

namespace ssk {

/// Deterministic random stream. Independent streams for parallel work are
/// derived by hashing (seed, lane, index) into the mt19937_64 seed, so
/// results do not depend on thread count or execution order. The uniform and
/// Gaussian mappings are implemented here (not via std::distributions) to
/// keep byte-identical output across standard libraries.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : eng_(seed) {}

  static std::uint64_t mix(std::uint64_t h) {
    // splitmix64 finalizer
    h += 0x9e3779b97f4a7c15ULL;
    h = (h ^ (h >> 30)) * 0xbf58476d1ce4e5b9ULL;
    h = (h ^ (h >> 27)) * 0x94d049bb133111ebULL;
    return h ^ (h >> 31);
  }

  static RandomStream derive(std::uint64_t seed, std::uint64_t lane, std::uint64_t index) {
    std::uint64_t h = mix(seed);
    h = mix(h ^ (0x517cc1b727220a95ULL + lane));
    h = mix(h ^ (0x2545f4914f6cdd1dULL + index));
    return RandomStream(h);
  }

  std::uint64_t bits() { return eng_(); }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  /// Standard normal via Box-Muller (pairs cached).
  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double phi = 2.0 * std::numbers::pi * uniform();
    spare_ = r * std::sin(phi);
    have_spare_ = true;
    return r * std::cos(phi);
  }

  /// Complex Gaussian with the given variance per real/imaginary part.
  std::complex<double> cgaussian(double var_per_part) {
    const double s = std::sqrt(var_per_part);
    const double re = gaussian();
    const double im = gaussian();
    return {s * re, s * im};
  }

  /// n random '0'/'1' characters.
  std::string random_bits(std::size_t n) {
    std::string out(n, '0');
    std::uint64_t word = 0;
    int left = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (left == 0) {
        word = eng_();
        left = 64;
      }
      out[i] = (word & 1u) ? '1' : '0';
      word >>= 1;
      --left;
    }
    return out;
  }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) { return eng_() % n; }

 private:
  std::mt19937_64 eng_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace ssk
