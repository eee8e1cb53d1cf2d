#include "noiselab/kernels.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "json.hpp"

namespace noiselab {

namespace {

constexpr double kPi = std::numbers::pi;

double norm2(std::span<const double> z) {
  double s = 0.0;
  for (double v : z) s += v * v;
  return std::sqrt(s);
}

void check_dim(const KernelSpec& k, std::span<const double> z) {
  if (static_cast<int>(z.size()) != k.dim)
    throw std::invalid_argument("kernel/vector dimension mismatch");
}

// 1-D normalized profile factors.
double gaussian_factor_1d(double z, double sigma) {
  const double t = z / sigma;
  return std::exp(-t * t) / (sigma * std::sqrt(kPi));
}

double laplace_factor_1d(double z, double sigma) {
  return std::exp(-std::abs(z) / sigma) / (2.0 * sigma);
}

}  // namespace

KernelFamily kernel_family_from_string(const std::string& name) {
  if (name == "gaussian") return KernelFamily::gaussian;
  if (name == "laplace") return KernelFamily::laplace;
  if (name == "uniform_ball") return KernelFamily::uniform_ball;
  throw std::invalid_argument("unknown kernel family: " + name);
}

std::string to_string(KernelFamily family) {
  switch (family) {
    case KernelFamily::gaussian: return "gaussian";
    case KernelFamily::laplace: return "laplace";
    case KernelFamily::uniform_ball: return "uniform_ball";
  }
  throw std::logic_error("unreachable kernel family");
}

void validate_spec(const KernelSpec& k) {
  if (!(k.scale > 0.0)) throw std::invalid_argument("kernel scale must be positive");
  if (k.dim < 1) throw std::invalid_argument("kernel dim must be >= 1");
  if (k.family == KernelFamily::uniform_ball && k.dim != 2)
    throw std::invalid_argument("uniform_ball kernel requires dim = 2");
}

KernelSpec make_kernel(KernelFamily family, double scale, int dim) {
  KernelSpec k{family, scale, dim};
  validate_spec(k);
  return k;
}

double density(const KernelSpec& k, std::span<const double> z) {
  validate_spec(k);
  check_dim(k, z);
  switch (k.family) {
    case KernelFamily::gaussian: {
      double prod = 1.0;
      for (double zi : z) prod *= gaussian_factor_1d(zi, k.scale);
      return prod;
    }
    case KernelFamily::laplace: {
      double prod = 1.0;
      for (double zi : z) prod *= laplace_factor_1d(zi, k.scale);
      return prod;
    }
    case KernelFamily::uniform_ball: {
      return norm2(z) < k.scale ? 1.0 / (k.scale * k.scale * kPi) : 0.0;
    }
  }
  throw std::logic_error("unreachable kernel family");
}

double peak_ratio(const KernelSpec& k, std::span<const double> displacement) {
  validate_spec(k);
  check_dim(k, displacement);
  switch (k.family) {
    case KernelFamily::gaussian: {
      double s = 0.0;
      for (double zi : displacement) {
        const double t = zi / k.scale;
        s += t * t;
      }
      return std::exp(-s);
    }
    case KernelFamily::laplace: {
      double s = 0.0;
      for (double zi : displacement) s += std::abs(zi) / k.scale;
      return std::exp(-s);
    }
    case KernelFamily::uniform_ball: {
      return norm2(displacement) < k.scale ? 1.0 : 0.0;
    }
  }
  throw std::logic_error("unreachable kernel family");
}

void sample_into(const KernelSpec& k, rng::Stream& stream, std::span<double> out) {
  validate_spec(k);
  if (static_cast<int>(out.size()) != k.dim)
    throw std::invalid_argument("sample output span has wrong length");
  switch (k.family) {
    case KernelFamily::gaussian: {
      const double tau = k.scale / std::sqrt(2.0);
      for (double& v : out) v = tau * stream.normal();
      return;
    }
    case KernelFamily::laplace: {
      for (double& v : out) v = stream.laplace(k.scale);
      return;
    }
    case KernelFamily::uniform_ball: {
      // Polar transform: uniform on the open disk of radius sigma.
      const double r = k.scale * std::sqrt(stream.uniform01_open());
      const double theta = 2.0 * kPi * stream.uniform01();
      out[0] = r * std::cos(theta);
      out[1] = r * std::sin(theta);
      return;
    }
  }
  throw std::logic_error("unreachable kernel family");
}

std::vector<std::vector<double>> sample(const KernelSpec& k, rng::Stream& stream,
                                        std::size_t count) {
  if (count < 1) throw std::invalid_argument("sample count must be >= 1");
  std::vector<std::vector<double>> draws(count, std::vector<double>(k.dim));
  for (auto& d : draws) sample_into(k, stream, d);
  return draws;
}

bool ValidationReport::all_ok() const {
  bool ok = unit_mass.ok && symmetry.ok && mode_at_origin.ok && monotone_decay.ok;
  if (separability_checked) ok = ok && separability.ok;
  if (log_concavity_checked) ok = ok && log_concavity.ok;
  return ok;
}

namespace {

// Midpoint-rule mass of the 1-D profile over [-extent, extent].
double mass_1d(const KernelSpec& k, double extent, std::int64_t cells) {
  const double h = 2.0 * extent / static_cast<double>(cells);
  double acc = 0.0;
  for (std::int64_t i = 0; i < cells; ++i) {
    const double z = -extent + (static_cast<double>(i) + 0.5) * h;
    const double f = k.family == KernelFamily::gaussian
                         ? gaussian_factor_1d(z, k.scale)
                         : laplace_factor_1d(z, k.scale);
    acc += f;
  }
  return acc * h;
}

}  // namespace

ValidationReport validate(const KernelSpec& k, const QuadratureConfig& grid) {
  validate_spec(k);
  if (grid.cells_per_axis < 8) throw std::invalid_argument("quadrature grid too coarse");
  const bool bounded = k.family == KernelFamily::uniform_ball;
  if (!bounded && grid.extent_sigmas < 8.0)
    throw std::invalid_argument("quadrature extent must cover >= 8 sigma per coordinate");

  ValidationReport report;
  const double extent = bounded ? k.scale : grid.extent_sigmas * k.scale;
  const double h = 2.0 * extent / static_cast<double>(grid.cells_per_axis);

  // Unit mass.
  double mass = 0.0;
  double mass_tol = grid.tolerance;
  if (bounded) {
    // 2-D midpoint count of in-disk cell centers; resolution-limited at the
    // boundary, so the acceptance band widens with the cell size.
    double inside = 0.0;
    std::vector<double> z(2);
    for (std::int64_t j = 0; j < grid.cells_per_axis; ++j) {
      z[1] = -extent + (static_cast<double>(j) + 0.5) * h;
      for (std::int64_t i = 0; i < grid.cells_per_axis; ++i) {
        z[0] = -extent + (static_cast<double>(i) + 0.5) * h;
        inside += density(k, z);
      }
    }
    mass = inside * h * h;
    mass_tol = std::max(mass_tol, 8.0 * h / k.scale);
  } else {
    mass = std::pow(mass_1d(k, extent, grid.cells_per_axis), k.dim);
  }
  if (!std::isfinite(mass)) throw std::runtime_error("quadrature diverged");
  report.unit_mass = {std::abs(mass - 1.0) <= mass_tol, std::abs(mass - 1.0)};

  // Probe points for the pointwise checks.
  rng::Stream probe = rng::derive(grid.probe_seed, 0x6b65726e);
  std::vector<std::vector<double>> probes;
  for (int i = 0; i < grid.probe_count; ++i) {
    std::vector<double> z(k.dim);
    for (double& v : z) v = (2.0 * probe.uniform01() - 1.0) * extent;
    probes.push_back(std::move(z));
  }

  // Symmetry: density(z) == density(-z) bitwise.
  {
    double worst = 0.0;
    bool ok = true;
    for (const auto& z : probes) {
      std::vector<double> neg(z.size());
      for (std::size_t i = 0; i < z.size(); ++i) neg[i] = -z[i];
      const double a = density(k, z);
      const double b = density(k, neg);
      if (a != b) ok = false;
      worst = std::max(worst, std::abs(a - b));
    }
    report.symmetry = {ok, worst};
  }

  // Mode at the origin.
  {
    const std::vector<double> zero(k.dim, 0.0);
    const double peak = density(k, zero);
    double worst = 0.0;
    bool ok = true;
    for (const auto& z : probes) {
      const double v = density(k, z);
      if (v > peak) ok = false;
      worst = std::max(worst, v - peak);
    }
    report.mode_at_origin = {ok, worst};
  }

  // Separability against the product of 1-D evaluations.
  if (!bounded) {
    const KernelSpec k1{k.family, k.scale, 1};
    double worst = 0.0;
    bool ok = true;
    for (const auto& z : probes) {
      double prod = 1.0;
      for (double zi : z) prod *= density(k1, std::span<const double>(&zi, 1));
      const double v = density(k, z);
      const double denom = std::max(std::abs(v), 1e-300);
      const double rel = std::abs(v - prod) / denom;
      worst = std::max(worst, rel);
      if (rel > 1e-12) ok = false;
    }
    report.separability = {ok, worst};
    report.separability_checked = true;
  }

  // Per-coordinate monotone decay in |z_i| along each axis.
  {
    bool ok = true;
    double worst = 0.0;
    std::vector<double> z(k.dim, 0.0);
    for (int axis = 0; axis < k.dim; ++axis) {
      double prev = density(k, z);  // value at the origin
      for (std::int64_t step = 1; step <= grid.cells_per_axis / 2; ++step) {
        z[axis] = static_cast<double>(step) * h;
        const double v = density(k, z);
        if (v > prev) {
          ok = false;
          worst = std::max(worst, v - prev);
        }
        prev = v;
      }
      z[axis] = 0.0;
    }
    report.monotone_decay = {ok, worst};
  }

  // Discrete log-concavity along axis grid lines (second differences of the
  // log-density must not exceed a small tolerance).
  if (!bounded) {
    bool ok = true;
    double worst = 0.0;
    std::vector<double> z(k.dim, 0.0);
    for (int axis = 0; axis < k.dim; ++axis) {
      std::vector<double> logs;
      for (std::int64_t step = -grid.cells_per_axis / 2; step <= grid.cells_per_axis / 2;
           ++step) {
        z[axis] = static_cast<double>(step) * h;
        const double v = density(k, z);
        if (v <= 0.0) {
          logs.push_back(-1e308);
          continue;
        }
        logs.push_back(std::log(v));
      }
      for (std::size_t i = 1; i + 1 < logs.size(); ++i) {
        const double second = logs[i - 1] - 2.0 * logs[i] + logs[i + 1];
        worst = std::max(worst, second);
        if (second > 1e-9) ok = false;
      }
      z[axis] = 0.0;
    }
    report.log_concavity = {ok, worst};
    report.log_concavity_checked = true;
  }

  return report;
}

KernelSpec kernel_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("bad kernel JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("family") || !j.contains("scale") || !j.contains("dim"))
    throw std::invalid_argument("kernel JSON needs family, scale, dim");
  return make_kernel(kernel_family_from_string(j["family"].get<std::string>()),
                     j["scale"].get<double>(), j["dim"].get<int>());
}

std::string kernel_to_json(const KernelSpec& k) {
  nlohmann::json j;
  j["family"] = to_string(k.family);
  j["scale"] = k.scale;
  j["dim"] = k.dim;
  return j.dump();
}

}  // namespace noiselab
