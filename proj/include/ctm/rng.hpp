#pragma once

#include <cstdint>
#include <span>

namespace ctm {

// xoshiro256** (Blackman & Vigna) seeded through SplitMix64.
//
// Streams: Rng(seed, stream) mixes the stream id into the SplitMix64 seed
// sequence, so replicate r of a Monte Carlo run always sees the same numbers
// regardless of which thread executes it.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return ~result_type{0}; }

  result_type operator()() noexcept { return next(); }
  std::uint64_t next() noexcept;

  // Uniform in [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, bound), bound > 0. Lemire's nearly-divisionless method.
  std::uint32_t below(std::uint32_t bound) noexcept;

  // Index drawn from a probability vector (assumed to sum to ~1). Mass lost to
  // rounding falls on the last index with positive weight.
  std::size_t categorical(std::span<const double> probs) noexcept;

 private:
  std::uint64_t s_[4];
};

std::uint64_t splitmix64(std::uint64_t& state) noexcept;

}  // namespace ctm
