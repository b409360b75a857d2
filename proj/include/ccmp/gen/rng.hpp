#pragma once

#include <cstdint>

namespace ccmp::gen {

// xoshiro256** seeded through splitmix64. Pinned so that generated
// instances are identical on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next();
  // Uniform in [0, 1) with 53 random bits.
  double unit();
  // Uniform real in [lo, hi].
  double uniform(double lo, double hi);
  // Uniform integer in [lo, hi], unbiased by rejection.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

 private:
  std::uint64_t s_[4];
};

}  // namespace ccmp::gen
