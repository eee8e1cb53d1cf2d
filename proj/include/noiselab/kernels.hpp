#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "noiselab/rng.hpp"

namespace noiselab {

enum class KernelFamily { gaussian, laplace, uniform_ball };

KernelFamily kernel_family_from_string(const std::string& name);
std::string to_string(KernelFamily family);

// Noise distribution n_sigma: family, scale sigma, and dimension.
//
// gaussian and laplace are separable products of 1-D profiles
// exp(-psi(z_i/sigma)) with psi(z) = z^2 resp. |z|, normalized to unit mass
// (isotropic normal with per-coordinate deviation sigma/sqrt(2); product of
// 1-D Laplace with scale sigma). uniform_ball is the planar disk density
// 1/(sigma^2 pi) on ||z|| < sigma and requires dim = 2.
struct KernelSpec {
  KernelFamily family = KernelFamily::gaussian;
  double scale = 1.0;
  int dim = 1;
};

// Validates scale > 0, dim >= 1, and uniform_ball => dim == 2.
void validate_spec(const KernelSpec& k);
KernelSpec make_kernel(KernelFamily family, double scale, int dim);

// Normalized density n_sigma(z).
double density(const KernelSpec& k, std::span<const double> z);

// density(k, displacement) / density(k, 0); normalization constants cancel.
double peak_ratio(const KernelSpec& k, std::span<const double> displacement);

// One i.i.d. draw written into out (length k.dim).
void sample_into(const KernelSpec& k, rng::Stream& stream, std::span<double> out);
std::vector<std::vector<double>> sample(const KernelSpec& k, rng::Stream& stream,
                                        std::size_t count);

struct QuadratureConfig {
  std::int64_t cells_per_axis = 512;
  double extent_sigmas = 8.0;  // half-width of the grid, in units of sigma
  double tolerance = 1e-6;
  int probe_count = 64;
  std::uint64_t probe_seed = 17;
};

struct CheckResult {
  bool ok = false;
  double residual = 0.0;
};

struct ValidationReport {
  CheckResult unit_mass;
  CheckResult symmetry;
  CheckResult mode_at_origin;
  CheckResult separability;  // only meaningful when separability_checked
  bool separability_checked = false;
  CheckResult monotone_decay;
  CheckResult log_concavity;  // only meaningful when log_concavity_checked
  bool log_concavity_checked = false;

  bool all_ok() const;
};

// Measures properties of the implemented density against midpoint quadrature:
// unit mass, symmetry, mode at the origin, separability (gaussian/laplace),
// per-coordinate monotone decay, and discrete log-concavity along axes
// (gaussian/laplace). Throws if the grid does not cover extent_sigmas >= 8
// for unbounded kernels or if the quadrature diverges.
ValidationReport validate(const KernelSpec& k, const QuadratureConfig& grid = {});

// JSON form {"family": "...", "scale": <real>, "dim": <int>}.
KernelSpec kernel_from_json(const std::string& text);
std::string kernel_to_json(const KernelSpec& k);

}  // namespace noiselab
