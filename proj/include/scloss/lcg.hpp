#pragma once

#include <cstdint>

namespace scloss {

/// 64-bit linear congruential generator used for every reproducible fixture.
///
///   state <- state * 6364136223846793005 + 1442695040888963407   (mod 2^64)
///   uniform() = (state >> 11) * 2^-53                            in [0, 1)
///
/// The state starts at the seed and is advanced before each draw, so any
/// implementation of the recurrence reproduces the same inputs.
class Lcg64 {
 public:
  explicit Lcg64(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next() noexcept {
    state_ = state_ * 6364136223846793005ULL + 1442695040888963407ULL;
    return state_;
  }

  double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

  bool coin() noexcept { return uniform() < 0.5; }

 private:
  std::uint64_t state_;
};

}  // namespace scloss
