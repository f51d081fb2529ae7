#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace singpencil {

/// Seeded random stream. All randomness in the library is drawn from an
/// explicitly passed Rng; there is no global generator.
///
/// Child streams are derived with split(): the child seed is the splitmix64
/// hash of (parent seed + stream id * golden ratio constant). A child depends
/// only on the parent seed and the id, never on how many values the parent
/// has already drawn, so parallel loops stay reproducible.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const noexcept { return seed_; }

  Rng split(std::uint64_t stream_id) const;

  double uniform(double lo = 0.0, double hi = 1.0) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
  }

  double normal() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }

  /// Standard complex Gaussian: real and imaginary parts N(0, 1/2).
  std::complex<double> complex_normal() {
    constexpr double kHalfSqrt2 = 0.70710678118654752440;
    const double re = normal();
    const double im = normal();
    return {kHalfSqrt2 * re, kHalfSqrt2 * im};
  }

  /// Uniform point on the unit circle.
  std::complex<double> unit_circle();

  std::mt19937_64& engine() noexcept { return engine_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

}  // namespace singpencil
