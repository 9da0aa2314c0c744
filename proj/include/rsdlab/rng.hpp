#pragma once

#include <cstdint>
#include <vector>

// Deterministic random numbers. Output is defined bit-for-bit by the code
// below and does not depend on the standard library's distributions.
//
//  generator     SplitMix64 (Steele, Lea, Flood 2014): state += 0x9E3779B97F4A7C15,
//                output = mix64(state).
//  bounded draw  multiply-high: floor(x * bound / 2^64). No rejection loop; the
//                bias is below bound / 2^64.
//  shuffle       Fisher-Yates from the last index down.
//  substreams    seed_of(seed, run, index) =
//                mix64(mix64(mix64(seed) ^ (run + 1) * K1) ^ (index + 1) * K2).

namespace rsdlab {

inline constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

class SplitMix64 {
 public:
  explicit constexpr SplitMix64(std::uint64_t seed) : state_(seed) {}

  constexpr std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix64(state_);
  }

  /// Uniform integer in [0, bound), bound >= 1.
  constexpr std::uint64_t below(std::uint64_t bound) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(next()) * bound) >> 64);
  }

  std::uint64_t state() const { return state_; }

 private:
  std::uint64_t state_;
};

inline constexpr std::uint64_t kRunSalt = 0xD1B54A32D192ED03ULL;
inline constexpr std::uint64_t kIndexSalt = 0xAEF17502108EF2D9ULL;

/// Seed for sample `index` of run `run` under a base seed.
inline constexpr std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t run, std::uint64_t index) {
  return mix64(mix64(mix64(seed) ^ ((run + 1) * kRunSalt)) ^ ((index + 1) * kIndexSalt));
}

/// Fisher-Yates shuffle of 1..n.
inline void shuffle_identity(std::vector<int>& out, int n, SplitMix64& rng) {
  out.resize(n);
  for (int i = 0; i < n; ++i) out[i] = i + 1;
  for (int i = n - 1; i > 0; --i) {
    auto j = static_cast<int>(rng.below(static_cast<std::uint64_t>(i) + 1));
    std::swap(out[i], out[j]);
  }
}

}  // namespace rsdlab
