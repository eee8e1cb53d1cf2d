#pragma once

#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "noiselab/dataset.hpp"
#include "noiselab/kernels.hpp"

namespace noiselab {

// Raised when the feasibility predicate is not monotone on the audit grid;
// the CLI maps this to exit code 3.
class MonotonicityViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Critical noise level of a point set under a kernel family: the largest
// sigma at which every point's own kernel peak dominates the combined mass
// of all other points.
struct ThresholdResult {
  double theta_weak = 0.0;    // sup sigma with the non-strict constraint
  double theta_strict = 0.0;  // sup sigma with the strict constraint
  std::size_t binding_index = 0;
  std::vector<std::pair<double, double>> residual_curve;  // (sigma, min slack)
};

// True iff for every x in S_X: 1 (>= | >) sum over x' != x of
// peak_ratio(k_sigma, x - x'). Requires N >= 3.
bool feasible(const LabeledDataset& ds, KernelFamily family, double sigma, bool strict);

// Monotone bisection on sigma, bracketed by geometric expansion from
// min_pairwise_distance / 4. rel_tol must lie in (1e-12, 1e-3).
ThresholdResult solve_threshold(const LabeledDataset& ds, KernelFamily family,
                                double rel_tol);

}  // namespace noiselab
