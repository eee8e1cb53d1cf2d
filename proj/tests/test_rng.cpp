#include "doctest.h"

#include <cmath>
#include <vector>

#include "noiselab/rng.hpp"

using namespace noiselab;

TEST_CASE("derived streams are deterministic and distinct") {
  rng::Stream a = rng::derive(42, 1, 2);
  rng::Stream b = rng::derive(42, 1, 2);
  rng::Stream c = rng::derive(42, 1, 3);
  std::vector<std::uint64_t> xs, ys, zs;
  for (int i = 0; i < 16; ++i) {
    xs.push_back(a.next_u64());
    ys.push_back(b.next_u64());
    zs.push_back(c.next_u64());
  }
  CHECK(xs == ys);
  CHECK(xs != zs);
}

TEST_CASE("uniform01 stays in [0,1) and open variant avoids endpoints") {
  rng::Stream s = rng::derive(7, 0);
  for (int i = 0; i < 10000; ++i) {
    const double u = s.uniform01();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    const double v = s.uniform01_open();
    CHECK(v > 0.0);
    CHECK(v < 1.0);
  }
}

TEST_CASE("normal transform has sane moments") {
  rng::Stream s = rng::derive(11, 0);
  const int n = 200000;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = s.normal();
    sum += x;
    sq += x * x;
  }
  const double mean = sum / n;
  const double var = sq / n - mean * mean;
  CHECK(std::abs(mean) < 0.01);
  CHECK(var == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("below() covers the range without bias at small n") {
  rng::Stream s = rng::derive(13, 0);
  std::vector<int> counts(5, 0);
  const int n = 50000;
  for (int i = 0; i < n; ++i) ++counts[s.below(5)];
  for (int c : counts) CHECK(std::abs(c - n / 5) < 5 * std::sqrt(n * 0.2 * 0.8));
}
