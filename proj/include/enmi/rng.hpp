// Seeded, splittable random streams for reproducible trials. Substreams
// are keyed by (seed, lane, index) through the splitmix64 finalizer, so a
// trial's draws depend only on its key and never on which worker ran it.
// Gaussians come from a hand-rolled Box-Muller: the sequence is fixed by
// this header, not by the standard library's distribution internals.

#pragma once

#include <cmath>
#include <cstdint>

namespace enmi {

namespace detail {

inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace detail

inline std::uint64_t substream_key(std::uint64_t seed, std::uint64_t lane, std::uint64_t index) {
  return detail::mix64(detail::mix64(detail::mix64(seed) ^ (lane + 0x632be59bd9b4e019ULL)) ^
                       (index + 0x9e3779b97f4a7c15ULL));
}

/// splitmix64 stream.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1).
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform double in (0, 1]; safe as a log argument.
  double next_double_open() { return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

/// Standard normal stream (Box-Muller over SplitMix64).
class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t key) : rng_(key) {}

  double next() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    constexpr double two_pi = 6.28318530717958647692;
    const double u1 = rng_.next_double_open();
    const double u2 = rng_.next_double();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(two_pi * u2);
    has_spare_ = true;
    return r * std::cos(two_pi * u2);
  }

 private:
  SplitMix64 rng_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace enmi
