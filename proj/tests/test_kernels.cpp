#include "doctest.h"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "noiselab/kernels.hpp"
#include "noiselab/rng.hpp"

using namespace noiselab;

namespace {
std::vector<double> vec(std::initializer_list<double> xs) { return xs; }
}  // namespace

TEST_CASE("kernel spec validation") {
  CHECK_THROWS_AS(make_kernel(KernelFamily::gaussian, 0.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(make_kernel(KernelFamily::gaussian, -1.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(make_kernel(KernelFamily::gaussian, 1.0, 0), std::invalid_argument);
  CHECK_THROWS_AS(make_kernel(KernelFamily::uniform_ball, 1.0, 3), std::invalid_argument);
  CHECK_NOTHROW(make_kernel(KernelFamily::uniform_ball, 1.0, 2));
}

TEST_CASE("gaussian density matches the tau = sigma/sqrt(2) normalization") {
  // Table mapping: sigma = sqrt(2) * tau, so tau = 1 at sigma = sqrt(2).
  const KernelSpec k = make_kernel(KernelFamily::gaussian, std::sqrt(2.0), 1);
  const auto z = vec({0.0});
  CHECK(density(k, z) == doctest::Approx(1.0 / std::sqrt(2.0 * std::numbers::pi))
                             .epsilon(1e-12));

  // Quadrature oracle: the implemented density integrates to one.
  const double extent = 8.0 * k.scale;
  const int cells = 1 << 16;
  const double h = 2.0 * extent / cells;
  double mass = 0.0;
  for (int i = 0; i < cells; ++i) {
    const double x = -extent + (i + 0.5) * h;
    mass += density(k, std::vector<double>{x});
  }
  mass *= h;
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("uniform ball density is 1/(sigma^2 pi) inside and 0 outside") {
  const KernelSpec k = make_kernel(KernelFamily::uniform_ball, 1.0, 2);
  CHECK(density(k, vec({0.0, 0.0})) == doctest::Approx(1.0 / std::numbers::pi).epsilon(1e-15));
  CHECK(density(k, vec({0.999, 0.0})) == doctest::Approx(1.0 / std::numbers::pi).epsilon(1e-15));
  CHECK(density(k, vec({1.0, 0.0})) == 0.0);  // strict boundary
  CHECK(density(k, vec({1.5, 0.0})) == 0.0);
}

TEST_CASE("dimension mismatch raises") {
  const KernelSpec k = make_kernel(KernelFamily::gaussian, 1.0, 2);
  CHECK_THROWS_AS(density(k, vec({1.0})), std::invalid_argument);
  CHECK_THROWS_AS(peak_ratio(k, vec({1.0, 2.0, 3.0})), std::invalid_argument);
}

TEST_CASE("peak_ratio identities") {
  const KernelSpec g = make_kernel(KernelFamily::gaussian, 1.0, 1);
  CHECK(peak_ratio(g, vec({0.0})) == 1.0);
  CHECK(peak_ratio(g, vec({1.0})) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));

  const KernelSpec u = make_kernel(KernelFamily::uniform_ball, 1.0, 2);
  CHECK(peak_ratio(u, vec({0.0, 0.0})) == 1.0);
  CHECK(peak_ratio(u, vec({1.5, 0.0})) == 0.0);
  CHECK(peak_ratio(u, vec({0.3, 0.4})) == 1.0);

  // Ratio of two density evaluations agrees with the direct formula.
  const KernelSpec l = make_kernel(KernelFamily::laplace, 0.7, 3);
  const auto z = vec({0.3, -0.2, 0.9});
  const std::vector<double> zero(3, 0.0);
  CHECK(peak_ratio(l, z) ==
        doctest::Approx(density(l, z) / density(l, zero)).epsilon(1e-12));
}

TEST_CASE("density is bitwise symmetric and peaked at the origin") {
  for (const auto family :
       {KernelFamily::gaussian, KernelFamily::laplace, KernelFamily::uniform_ball}) {
    const int dim = family == KernelFamily::uniform_ball ? 2 : 3;
    const KernelSpec k = make_kernel(family, 1.3, dim);
    rng::Stream s = rng::derive(5, static_cast<int>(family));
    const std::vector<double> zero(dim, 0.0);
    const double peak = density(k, zero);
    for (int t = 0; t < 200; ++t) {
      std::vector<double> z(dim), neg(dim);
      for (int a = 0; a < dim; ++a) {
        z[a] = 4.0 * (s.uniform01() - 0.5);
        neg[a] = -z[a];
      }
      CHECK(density(k, z) == density(k, neg));
      CHECK(density(k, z) <= peak);
    }
  }
}

TEST_CASE("peak_ratio is non-decreasing in sigma at fixed displacement") {
  const auto disp = vec({0.8, -0.3});
  for (const auto family : {KernelFamily::gaussian, KernelFamily::laplace}) {
    double prev = 0.0;
    for (double sigma = 0.25; sigma <= 8.0; sigma *= 1.3) {
      const KernelSpec k = make_kernel(family, sigma, 2);
      const double r = peak_ratio(k, disp);
      CHECK(r >= prev);
      prev = r;
    }
  }
}

TEST_CASE("peak_ratio scaling covariance") {
  rng::Stream s = rng::derive(23, 0);
  for (const auto family :
       {KernelFamily::gaussian, KernelFamily::laplace, KernelFamily::uniform_ball}) {
    const int dim = family == KernelFamily::uniform_ball ? 2 : 2;
    for (int t = 0; t < 50; ++t) {
      const double sigma = 0.5 + s.uniform01();
      const double c = 0.1 + 4.0 * s.uniform01();
      std::vector<double> z(dim), cz(dim);
      for (int a = 0; a < dim; ++a) {
        z[a] = 3.0 * (s.uniform01() - 0.5);
        cz[a] = c * z[a];
      }
      const KernelSpec k = make_kernel(family, sigma, dim);
      const KernelSpec ck = make_kernel(family, c * sigma, dim);
      CHECK(peak_ratio(ck, cz) == doctest::Approx(peak_ratio(k, z)).epsilon(1e-11));
    }
  }
}

TEST_CASE("sampling moments and support") {
  const std::size_t n = 100000;

  SUBCASE("gaussian mean near zero") {
    const double sigma = 2.0;
    const KernelSpec k = make_kernel(KernelFamily::gaussian, sigma, 2);
    rng::Stream s = rng::derive(101, 0);
    const auto draws = sample(k, s, n);
    const double tau = sigma / std::sqrt(2.0);
    for (int a = 0; a < 2; ++a) {
      double mean = 0.0;
      for (const auto& d : draws) mean += d[a];
      mean /= static_cast<double>(n);
      CHECK(std::abs(mean) < 4.0 * tau / std::sqrt(static_cast<double>(n)));
    }
  }

  SUBCASE("uniform ball draws stay strictly inside") {
    const KernelSpec k = make_kernel(KernelFamily::uniform_ball, 1.0, 2);
    rng::Stream s = rng::derive(102, 0);
    for (const auto& d : sample(k, s, 20000))
      CHECK(d[0] * d[0] + d[1] * d[1] < 1.0);
  }

  SUBCASE("laplace variance near 2 sigma^2") {
    const KernelSpec k = make_kernel(KernelFamily::laplace, 1.0, 1);
    rng::Stream s = rng::derive(103, 0);
    double sq = 0.0;
    for (const auto& d : sample(k, s, n)) sq += d[0] * d[0];
    const double var = sq / static_cast<double>(n);
    CHECK(var == doctest::Approx(2.0).epsilon(0.10));
  }

  SUBCASE("sampling is deterministic per stream seed") {
    const KernelSpec k = make_kernel(KernelFamily::laplace, 1.0, 2);
    rng::Stream a = rng::derive(9, 1);
    rng::Stream b = rng::derive(9, 1);
    CHECK(sample(k, a, 64) == sample(k, b, 64));
  }
}

TEST_CASE("validate: gaussian d=2 512-cell grid passes everything at 1e-6") {
  const KernelSpec k = make_kernel(KernelFamily::gaussian, 1.0, 2);
  QuadratureConfig grid;  // 512 cells, 8 sigma, 1e-6
  const auto report = validate(k, grid);
  CHECK(report.unit_mass.residual < 1e-6);
  CHECK(report.separability_checked);
  CHECK(report.log_concavity_checked);
  CHECK(report.all_ok());
}

TEST_CASE("validate: laplace needs a wider, finer grid for the mass flag") {
  // The heavy Laplace tail leaves ~3e-4 of mass beyond 8 sigma, so both the
  // extent and the cell count must grow for the 1e-6 band.
  const KernelSpec k = make_kernel(KernelFamily::laplace, 1.0, 2);
  QuadratureConfig grid;
  grid.cells_per_axis = 1 << 17;
  grid.extent_sigmas = 20.0;
  const auto report = validate(k, grid);
  CHECK(report.unit_mass.residual < 1e-6);
  CHECK(report.all_ok());
}

TEST_CASE("validate: uniform ball mass within grid-resolution error") {
  const KernelSpec k = make_kernel(KernelFamily::uniform_ball, 1.0, 2);
  QuadratureConfig grid;
  const auto report = validate(k, grid);
  const double h = 2.0 * k.scale / static_cast<double>(grid.cells_per_axis);
  CHECK(report.unit_mass.residual <= 8.0 * h / k.scale);
  CHECK(report.unit_mass.ok);
  CHECK(report.symmetry.ok);
  CHECK(report.symmetry.residual == 0.0);
  CHECK_FALSE(report.separability_checked);
  CHECK_FALSE(report.log_concavity_checked);
  CHECK(report.all_ok());
}

TEST_CASE("validate rejects grids that do not cover 8 sigma") {
  const KernelSpec k = make_kernel(KernelFamily::gaussian, 1.0, 1);
  QuadratureConfig grid;
  grid.extent_sigmas = 4.0;
  CHECK_THROWS_AS(validate(k, grid), std::invalid_argument);
}

TEST_CASE("kernel JSON round trip") {
  const KernelSpec k = make_kernel(KernelFamily::uniform_ball, 0.125, 2);
  const KernelSpec back = kernel_from_json(kernel_to_json(k));
  CHECK(back.family == k.family);
  CHECK(back.scale == k.scale);
  CHECK(back.dim == k.dim);
  CHECK_THROWS_AS(kernel_from_json("{\"family\":\"gaussian\"}"), std::invalid_argument);
  CHECK_THROWS_AS(kernel_from_json("not json"), std::invalid_argument);
}
