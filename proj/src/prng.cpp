#include "sinefield/prng.hpp"

#include <cmath>

#include "sinefield/errors.hpp"

namespace sf {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
  x += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t rotl(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

}  // namespace

Prng::Prng(std::uint64_t seed) : seed_(seed) {
  std::uint64_t sm = seed;
  for (auto& s : state_) s = splitmix64(sm);
}

std::uint64_t Prng::next_u64() {
  const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
  const std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = rotl(state_[3], 45);
  return result;
}

double Prng::unit() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Prng::uniform(double lo, double hi) {
  if (!(lo < hi)) throw InvalidArgument("uniform: empty range, lo >= hi");
  double v = lo + unit() * (hi - lo);
  if (v >= hi) v = std::nextafter(hi, lo);  // rounding guard, keeps [lo, hi)
  return v;
}

Matrix uniform_fill(Prng& rng, Index rows, Index cols, double lo, double hi) {
  if (!(lo < hi)) throw InvalidArgument("uniform_fill: empty range, lo >= hi");
  Matrix m(rows, cols);
  for (Index r = 0; r < rows; ++r)
    for (Index c = 0; c < cols; ++c) m(r, c) = rng.uniform(lo, hi);
  return m;
}

}  // namespace sf
