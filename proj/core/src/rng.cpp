#include "spingas/rng.hpp"

#include <cmath>
#include <numbers>

#include "spingas/errors.hpp"

namespace spingas {

std::uint64_t RngStream::mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream)
    : state_(mix(seed ^ mix(stream ^ 0x51a9d3c7b2e06f85ull))) {}

std::uint64_t RngStream::next_u64() {
  state_ += 0x9e3779b97f4a7c15ull;
  return mix(state_);
}

double RngStream::next_double() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint64_t RngStream::next_below(std::uint64_t bound) {
  if (bound == 0) throw InvalidInputError("next_below: bound must be positive");
  unsigned __int128 m = static_cast<unsigned __int128>(next_u64()) * bound;
  auto lo = static_cast<std::uint64_t>(m);
  if (lo < bound) {
    const std::uint64_t cutoff = (0ull - bound) % bound;
    while (lo < cutoff) {
      m = static_cast<unsigned __int128>(next_u64()) * bound;
      lo = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

double RngStream::next_normal(double sigma) {
  if (have_spare_) {
    have_spare_ = false;
    return sigma * spare_;
  }
  double u1 = next_double();
  while (u1 == 0.0) u1 = next_double();
  const double u2 = next_double();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(a);
  have_spare_ = true;
  return sigma * r * std::cos(a);
}

}  // namespace spingas
