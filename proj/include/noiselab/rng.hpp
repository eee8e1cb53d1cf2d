#pragma once

#include <cstdint>
#include <random>

namespace noiselab::rng {

// One SplitMix64 step; used to mix seed material for derived streams.
std::uint64_t splitmix64(std::uint64_t& state);

// Deterministic pseudo-random stream backed by std::mt19937_64 (whose raw
// output sequence is pinned by the standard). Distribution transforms are
// implemented here rather than with std:: distributions so that draws are
// identical across standard libraries.
//
// A Stream is owned by one caller at a time; concurrent users must derive
// independent sub-streams via derive().
class Stream {
 public:
  explicit Stream(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // Uniform on [0, 1), 53-bit resolution.
  double uniform01();
  // Uniform on (0, 1); never returns an exact endpoint.
  double uniform01_open();
  // Standard normal via the Marsaglia polar method.
  double normal();
  // Exponential with rate 1.
  double exponential();
  // Centered Laplace with scale b.
  double laplace(double b);
  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

 private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// Deterministically derives an independent sub-stream from a master seed and
// up to two lane indices.
Stream derive(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0);

}  // namespace noiselab::rng
