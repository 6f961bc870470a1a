#pragma once

#include <cstdint>
#include <random>

namespace qdc {

// Seedable, splittable generator. Every stochastic routine takes one of these
// (or a seed used to construct one) so that transcripts are reproducible.
//
// Draws are produced from raw 64-bit engine output with our own conversions,
// so results do not depend on the standard library's distribution classes.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0);

  std::uint64_t seed() const noexcept { return seed_; }

  std::uint64_t next_u64() { return engine_(); }
  // Uniform on [0, 1) with 53 bits of resolution.
  double uniform();
  // Uniform integer on [0, bound); bound must be positive.
  std::uint64_t below(std::uint64_t bound);
  bool bernoulli(double p) { return uniform() < p; }
  // Standard normal via Box-Muller.
  double normal();

  // Independent child stream derived deterministically from this generator's
  // seed and the stream id. Does not advance this generator.
  Rng split(std::uint64_t stream) const;

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace qdc
