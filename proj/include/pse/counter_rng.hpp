#pragma once

#include <cstdint>

// Counter-based splittable PRNG built on the SplitMix64 output function.
// Values are pure functions of (key, counter), so any draw can be
// regenerated in isolation and parallel schedules cannot change results.

namespace pse::rng {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;  // 2^64 / phi
inline constexpr std::uint64_t kSilver = 0x6A09E667F3BCC909ull;  // 2^64 * (sqrt 2 - 1)

inline std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Draw #counter of the SplitMix64 sequence seeded by key.
inline std::uint64_t at(std::uint64_t key, std::uint64_t counter) noexcept {
  return mix64(key + kGolden * (counter + 1));
}

// Child stream key; distinct indices give statistically independent streams.
inline std::uint64_t derive(std::uint64_t key, std::uint64_t index) noexcept {
  return mix64(key + kSilver * (index + 1));
}

// u in the open interval (0,1), symmetric about 1/2.
inline double to_unit(std::uint64_t bits) noexcept {
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

// Sequential view of one stream, for draws whose count is data-dependent.
class Stream {
 public:
  explicit Stream(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next() noexcept {
    state_ += kGolden;
    return mix64(state_);
  }

  double next_unit() noexcept { return to_unit(next()); }

  // Uniform on [0, n) via the multiply-shift map (bias < n / 2^64).
  std::uint64_t next_below(std::uint64_t n) noexcept {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next()) * n) >> 64);
  }

 private:
  std::uint64_t state_;
};

}  // namespace pse::rng
