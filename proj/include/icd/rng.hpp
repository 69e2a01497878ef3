#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace icd {

// Deterministic, platform-independent RNG: xoshiro256++ seeded through
// splitmix64. All sampling helpers are implemented here rather than with
// <random> distributions so that a seed produces the same stream on every
// standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();

  // Uniform double in [0, 1), 53-bit resolution.
  double uniform();
  // Uniform double in (0, 1).
  double uniform_open();
  // Unbiased integer in [0, bound). bound must be > 0.
  std::uint64_t uniform_int(std::uint64_t bound);

  // Standard normal via Box-Muller.
  double normal();
  // Gamma(shape, 1) via Marsaglia-Tsang; shapes < 1 use the Gamma(shape+1)
  // boost. shape must be > 0.
  double gamma(double shape);
  // Beta(alpha, beta) as X/(X+Y) with Gamma draws. Results are nudged off
  // exact 0/1 into the open interval by 1e-12.
  double beta(double alpha, double beta);

  // Seed for an independent substream, e.g. one per tree or per worker.
  static std::uint64_t substream(std::uint64_t seed, std::uint64_t index);

  // Identifier recorded in dataset/checkpoint headers.
  static constexpr std::string_view name() { return "xoshiro256++/splitmix64"; }

 private:
  std::array<std::uint64_t, 4> state_;
};

}  // namespace icd
