#include "noiselab/threshold.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace noiselab {

namespace {

void check_inputs(const LabeledDataset& ds) {
  if (ds.size() < 3) throw std::invalid_argument("threshold requires N >= 3");
  if (ds.alphabet().size() < 2)
    throw std::invalid_argument("threshold requires an alphabet of size >= 2");
}

// Per-point constraint mass: sum over x' != x of peak_ratio(k, x - x').
double constraint_sum(const LabeledDataset& ds, const KernelSpec& k, std::size_t i) {
  std::vector<double> diff(ds.dim());
  const auto xi = ds.point(i);
  double sum = 0.0;
  for (std::size_t j = 0; j < ds.size(); ++j) {
    if (j == i) continue;
    const auto xj = ds.point(j);
    for (std::size_t a = 0; a < diff.size(); ++a) diff[a] = xi[a] - xj[a];
    sum += peak_ratio(k, diff);
  }
  return sum;
}

double max_constraint_sum(const LabeledDataset& ds, KernelFamily family, double sigma,
                          std::size_t* argmax = nullptr) {
  const KernelSpec k = make_kernel(family, sigma, static_cast<int>(ds.dim()));
  double worst = -1.0;
  std::size_t arg = 0;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const double s = constraint_sum(ds, k, i);
    if (s > worst) {
      worst = s;
      arg = i;
    }
  }
  if (argmax) *argmax = arg;
  return worst;
}

bool feasible_at(const LabeledDataset& ds, KernelFamily family, double sigma, bool strict) {
  const double worst = max_constraint_sum(ds, family, sigma);
  return strict ? worst < 1.0 : worst <= 1.0;
}

// Bisects the monotone predicate; returns the last feasible sigma.
double bisect(const LabeledDataset& ds, KernelFamily family, bool strict, double lo,
              double hi, double rel_tol, double* first_infeasible = nullptr) {
  while ((hi - lo) / hi >= rel_tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // bracket at floating-point resolution
    if (feasible_at(ds, family, mid, strict))
      lo = mid;
    else
      hi = mid;
  }
  if (first_infeasible) *first_infeasible = hi;
  return lo;
}

}  // namespace

bool feasible(const LabeledDataset& ds, KernelFamily family, double sigma, bool strict) {
  check_inputs(ds);
  if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
  return feasible_at(ds, family, sigma, strict);
}

ThresholdResult solve_threshold(const LabeledDataset& ds, KernelFamily family,
                                double rel_tol) {
  check_inputs(ds);
  if (!(rel_tol > 1e-12 && rel_tol < 1e-3))
    throw std::invalid_argument("rel_tol must lie in (1e-12, 1e-3)");

  // Bracket from nearest-neighbor scale: expand/contract by factor 2.
  const double sigma0 = min_pairwise_distance(ds) / 4.0;
  double lo = sigma0;
  int guard = 0;
  while (!feasible_at(ds, family, lo, false)) {
    lo /= 2.0;
    if (++guard > 1100 || lo <= 0.0)
      throw std::runtime_error("no feasible sigma found above the smallest positive double");
  }
  double hi = lo;
  const double hi_cap = lo * std::pow(2.0, 60);
  do {
    hi *= 2.0;
    if (hi > hi_cap)
      throw std::runtime_error("threshold unbounded: no infeasible sigma up to 2^60 * " +
                               std::to_string(lo));
  } while (feasible_at(ds, family, hi, false));

  ThresholdResult result;
  double first_infeasible_weak = hi;
  result.theta_weak =
      bisect(ds, family, /*strict=*/false, lo, hi, rel_tol, &first_infeasible_weak);

  // The strict threshold can only be smaller; reuse the weak bracket.
  double strict_lo = lo;
  double strict_hi = first_infeasible_weak;
  if (!feasible_at(ds, family, result.theta_weak, true))
    strict_hi = std::min(strict_hi, result.theta_weak);
  else
    strict_lo = std::max(strict_lo, result.theta_weak);
  result.theta_strict = bisect(ds, family, /*strict=*/true, strict_lo, strict_hi, rel_tol);
  if (result.theta_strict > result.theta_weak) result.theta_strict = result.theta_weak;

  // For continuous families equality holds at isolated sigma only, so the two
  // thresholds must coincide up to solver resolution.
  if (family != KernelFamily::uniform_ball &&
      std::abs(result.theta_weak - result.theta_strict) > 4.0 * rel_tol * result.theta_weak)
    throw std::runtime_error("weak/strict threshold separation exceeds tolerance");

  // Binding point: the constraint that fails first just above theta_weak.
  max_constraint_sum(ds, family, first_infeasible_weak, &result.binding_index);

  // Monotonicity audit and residual curve on a geometric 32-point grid
  // spanning the explored bracket.
  const int audit_points = 32;
  const double grid_lo = lo;
  const double grid_hi = hi;
  const double ratio = std::pow(grid_hi / grid_lo, 1.0 / (audit_points - 1));
  bool seen_infeasible = false;
  for (int g = 0; g < audit_points; ++g) {
    const double sigma = grid_lo * std::pow(ratio, g);
    const double worst = max_constraint_sum(ds, family, sigma);
    result.residual_curve.emplace_back(sigma, 1.0 - worst);
    const bool ok = worst <= 1.0;
    if (!ok) seen_infeasible = true;
    if (ok && seen_infeasible)
      throw MonotonicityViolation("feasibility is not monotone in sigma at sigma=" +
                                  std::to_string(sigma));
  }

  return result;
}

}  // namespace noiselab
