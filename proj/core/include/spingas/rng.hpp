#pragma once

#include <cstdint>

namespace spingas {

// Keyed splitmix64 stream. Draw i depends only on (seed, stream, i), so a
// trajectory's randomness is independent of which worker runs it and in what
// order. std:: distributions are not used anywhere: their output is
// implementation-defined and would break the bit-exact replay contract.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64();

  // Uniform in [0, 1), 53-bit resolution.
  double next_double();

  // Uniform in [0, bound). Lemire multiply-shift with rejection, exact.
  std::uint64_t next_below(std::uint64_t bound);

  // Gaussian, mean 0, standard deviation sigma. Box-Muller; the spare value
  // is cached, so draws come in deterministic pairs.
  double next_normal(double sigma);

  static std::uint64_t mix(std::uint64_t z);

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

// Stream id reserved for the shared classical initial configuration; plain
// trajectory streams use their trajectory index.
inline constexpr std::uint64_t kInitConfigStream = 0xffffffff00000001ull;

}  // namespace spingas
