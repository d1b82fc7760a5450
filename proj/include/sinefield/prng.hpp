#pragma once

#include <cstdint>

#include "sinefield/types.hpp"

namespace sf {

// xoshiro256++ seeded through splitmix64. Equal seeds give bit-identical
// streams on every platform. An instance is owned by exactly one caller;
// distinct instances may run on distinct threads.
class Prng {
 public:
  explicit Prng(std::uint64_t seed);

  std::uint64_t next_u64();

  // Uniform draw in [0, 1) with 53 random bits.
  double unit();

  // Uniform draw in [lo, hi); throws InvalidArgument when lo >= hi.
  double uniform(double lo, double hi);

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t state_[4];
  std::uint64_t seed_;
};

// Fills row by row so the draw order is part of the contract.
Matrix uniform_fill(Prng& rng, Index rows, Index cols, double lo, double hi);

}  // namespace sf
