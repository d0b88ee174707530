#ifndef SICLADDER_RANDOM_HPP
#define SICLADDER_RANDOM_HPP

// Reproducible random draws. std::mt19937_64 output is fixed by the
// standard; the std:: distributions are not, so the few we need are
// written out here.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "sicladder/types.hpp"

namespace sicladder {

/// SplitMix64 finaliser. Derives independent per-task seeds:
/// restart k of a search seeded with s uses split_seed(s, k).
constexpr std::uint64_t split_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return double(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    // rejection keeps the draw unbiased
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

  /// Standard normal via Box-Muller.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(t);
    has_spare_ = true;
    return r * std::cos(t);
  }

  /// Haar-random unit vector in C^n.
  template <typename Real = double>
  CVector<Real> unit_vector(Eigen::Index n) {
    CVector<Real> v(n);
    for (Eigen::Index k = 0; k < n; ++k) {
      const double re = normal();
      const double im = normal();
      v(k) = Complex<Real>(Real(re), Real(im));
    }
    v.normalize();
    return v;
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace sicladder

#endif  // SICLADDER_RANDOM_HPP
