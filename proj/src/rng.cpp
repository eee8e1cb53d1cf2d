#include "noiselab/rng.hpp"

#include <cmath>

namespace noiselab::rng {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double Stream::uniform01() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Stream::uniform01_open() {
  return (static_cast<double>(next_u64() >> 12) + 0.5) * 0x1.0p-52;
}

double Stream::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform01() - 1.0;
    v = 2.0 * uniform01() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double factor = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * factor;
  have_spare_ = true;
  return u * factor;
}

double Stream::exponential() { return -std::log(uniform01_open()); }

double Stream::laplace(double b) {
  const double u = uniform01_open();
  return u < 0.5 ? b * std::log(2.0 * u) : -b * std::log(2.0 * (1.0 - u));
}

std::uint64_t Stream::below(std::uint64_t n) {
  // Rejection against the largest multiple of n to avoid modulo bias.
  const std::uint64_t limit = n * ((~std::uint64_t{0}) / n);
  std::uint64_t x;
  do {
    x = next_u64();
  } while (x >= limit);
  return x % n;
}

Stream derive(std::uint64_t master, std::uint64_t a, std::uint64_t b) {
  std::uint64_t state = master;
  std::uint64_t seed = splitmix64(state);
  state ^= 0xA24BAED4963EE407ULL * (a + 1);
  seed ^= splitmix64(state);
  state ^= 0x9FB21C651E98DF25ULL * (b + 1);
  seed ^= splitmix64(state);
  return Stream(seed);
}

}  // namespace noiselab::rng
