#pragma once

#include <cstdint>

namespace ratelab {

// SplitMix64. Fixed mixing constants, identical output on every platform;
// used wherever reproducibility across runs and machines is part of the
// contract (Julia-set sampling, packing order, Monte Carlo streams).
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1), 53 random bits.
  double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform in {0, ..., n-1}. Modulo bias is irrelevant for the branch
  // counts used here (n <= 64) and keeps the stream platform-stable.
  std::uint32_t next_below(std::uint32_t n) {
    return static_cast<std::uint32_t>(next() % n);
  }

  // Value of the j-th element of the substream with the given seed, without
  // advancing shared state. Used for per-sample Monte Carlo draws so that
  // worker partitioning cannot change the stream.
  static std::uint64_t at(std::uint64_t seed, std::uint64_t j) {
    SplitMix64 g(seed + j * 0x9e3779b97f4a7c15ULL);
    return g.next();
  }

  static double unit_at(std::uint64_t seed, std::uint64_t j) {
    return static_cast<double>(at(seed, j) >> 11) * 0x1.0p-53;
  }

 private:
  std::uint64_t state_;
};

}  // namespace ratelab
