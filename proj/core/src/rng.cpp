#include "plalam/rng.hpp"

#include <cmath>
#include <numbers>

namespace plalam {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
  x += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

}  // namespace

SplitRng::SplitRng(std::uint64_t seed) {
  std::uint64_t x = seed;
  for (auto& s : s_) s = splitmix64(x);
}

std::uint64_t SplitRng::next_u64() {
  std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
  std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

std::uint64_t SplitRng::uniform_int(std::uint64_t n) {
  std::uint64_t threshold = (0ULL - n) % n;
  for (;;) {
    std::uint64_t r = next_u64();
    if (r >= threshold) return r % n;
  }
}

double SplitRng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double SplitRng::uniform(double lo, double hi) {
  return lo + (hi - lo) * uniform();
}

double SplitRng::normal() {
  double u1 = 1.0 - uniform();  // (0, 1], keeps log() finite
  double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Eigen::VectorXd SplitRng::uniform_vec(int dim, double lo, double hi) {
  Eigen::VectorXd v(dim);
  for (int i = 0; i < dim; ++i) v[i] = uniform(lo, hi);
  return v;
}

Eigen::VectorXd SplitRng::normal_vec(int dim) {
  Eigen::VectorXd v(dim);
  for (int i = 0; i < dim; ++i) v[i] = normal();
  return v;
}

SplitRng SplitRng::split() {
  std::uint64_t child = next_u64();
  std::uint64_t mixed = child ^ 0xa0761d6478bd642fULL;
  return SplitRng(splitmix64(mixed));
}

}  // namespace plalam
