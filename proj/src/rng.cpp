#include "singpencil/rng.hpp"

#include <numbers>

namespace singpencil {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Rng Rng::split(std::uint64_t stream_id) const {
  return Rng(splitmix64(seed_ + (stream_id + 1) * 0x9e3779b97f4a7c15ULL));
}

std::complex<double> Rng::unit_circle() {
  const double theta = uniform(0.0, 2.0 * std::numbers::pi);
  return std::polar(1.0, theta);
}

}  // namespace singpencil
