#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace eberlein {

// Reproducible random source. The engine is std::mt19937_64, whose output
// sequence is fixed by the C++ standard. The standard distributions are
// implementation-defined, so the draws below are derived from raw engine
// output by fixed recipes:
//   uniform01: top 53 bits scaled by 2^-53, in [0, 1)
//   below(m):  rejection sampling on the raw 64-bit output modulo m
//   normal:    Box-Muller on two uniform01 draws, no caching
class Random {
 public:
  explicit Random(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  double uniform01();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
  std::uint64_t below(std::uint64_t m);
  double normal();

  // Fisher-Yates shuffle of 0..n-1 driven by below().
  std::vector<std::size_t> permutation(std::size_t n);

 private:
  std::mt19937_64 engine_;
};

}  // namespace eberlein
