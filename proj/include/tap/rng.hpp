/**
 * @file rng.hpp
 * @brief Deterministic random number generation for reproducible campaigns.
 *
 * All randomness in this project flows through Rng, a splitmix64 generator.
 * It is self-contained (no libc RNG, no std::*_distribution) so that a given
 * seed produces the same stream on every platform, which keeps golden tests
 * and parallel/sequential campaign equality honest.
 */
#pragma once

#include <cmath>
#include <cstdint>

namespace tap {

/// Seed for any deterministic operation in this library.
struct Seed {
  std::uint64_t value = 0;
};

namespace detail {
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}
}  // namespace detail

/// Derives an independent sub-seed for stream `k` of a master seed.
/// Used for per-case and per-purpose streams: case i of a campaign works from
/// derive_stream(master, i), so parallel and sequential runs agree.
inline Seed derive_stream(Seed master, std::uint64_t k) {
  std::uint64_t s = master.value ^ (0xD1B54A32D192ED03ULL * (k + 1));
  return Seed{detail::splitmix64_next(s)};
}

/// splitmix64 generator with convenience draws.
class Rng {
 public:
  explicit Rng(Seed seed) : state_(seed.value) {}

  std::uint64_t next_u64() { return detail::splitmix64_next(state_); }

  /// Uniform double in [0, 1) with 53 bits of resolution.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform double in [lo, hi).
  double next_double(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  /// Uniform integer in [lo, hi] inclusive.
  std::int64_t next_int(std::int64_t lo, std::int64_t hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(next_u64() % span);
  }

  /// Standard normal via Box-Muller; draws two uniforms per call.
  double next_gaussian() {
    double u1 = next_double();
    while (u1 <= 0.0) u1 = next_double();
    const double u2 = next_double();
    const double r = std::sqrt(-2.0 * std::log(u1));
    return r * std::cos(2.0 * 3.14159265358979323846 * u2);
  }

 private:
  std::uint64_t state_;
};

}  // namespace tap
