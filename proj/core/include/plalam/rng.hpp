#pragma once

#include <cstdint>
#include <Eigen/Core>

namespace plalam {

// Deterministic stream generator used everywhere randomness is needed.
//
// Core generator is xoshiro256++ seeded through splitmix64, so the integer
// stream depends only on the 64-bit seed and is identical on every platform.
// Floating-point draws are fixed arithmetic on top of that stream:
//   uniform():  53-bit mantissa in [0, 1)
//   normal():   Box-Muller (cosine branch), two uniforms per draw, no cache
// split() derives an independent child stream from the parent stream state;
// drawing from the child never touches the parent beyond the split itself.
class SplitRng {
public:
  explicit SplitRng(std::uint64_t seed);

  std::uint64_t next_u64();

  // Unbiased integer in [0, n), n >= 1. Rejection sampling, no modulo bias.
  std::uint64_t uniform_int(std::uint64_t n);

  double uniform();                      // [0, 1)
  double uniform(double lo, double hi);  // [lo, hi)
  double normal();                       // standard normal

  Eigen::VectorXd uniform_vec(int dim, double lo, double hi);
  Eigen::VectorXd normal_vec(int dim);

  SplitRng split();

private:
  std::uint64_t s_[4];
};

}  // namespace plalam
