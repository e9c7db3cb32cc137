#pragma once

#include <cstdint>

namespace tworank {

/// splitmix64 (Steele, Lea, Flood) with the usual published constants.
class SplitMix64
{
public:
  explicit constexpr SplitMix64(std::uint64_t seed) noexcept
  : state_(seed)
  {}

  constexpr std::uint64_t next() noexcept
  {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// One fair bit: the top bit of the next output.
  constexpr bool bit() noexcept { return (next() >> 63) != 0; }

  constexpr std::uint64_t below(std::uint64_t bound) noexcept
  { return bound == 0 ? 0 : next() % bound; }

private:
  std::uint64_t state_;
};

/// Seed of the trial with index `index` in a stream rooted at `seed`.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept
{ return SplitMix64(seed + index).next(); }

} // namespace tworank
