#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "noiselab/dataset.hpp"
#include "noiselab/smoothing.hpp"

namespace noiselab {

enum class Norm { l1, l2, linf };

Norm norm_from_string(const std::string& name);
std::string to_string(Norm p);
double lp_norm(std::span<const double> v, Norm p);

// Derivative-free search over the lp budget ball: per direction the attack
// tests the budget sphere plus a fixed absolute geometric radius ladder, so
// the candidate set for a smaller budget is contained in that of a larger
// one and attack success is monotone in epsilon for a fixed seed.
struct AttackConfig {
  Norm p = Norm::l2;
  double epsilon = 0.0;
  int n_random = 64;   // directions
  int n_refine = 20;   // bisection steps toward the decision boundary
  std::uint64_t seed = 0;
};

struct AttackOutcome {
  bool success = false;
  std::vector<double> adversarial_point;  // empty unless success
};

// Exact 0-1 accuracy of clf over ds.
double natural_accuracy(const BaseClassifier& clf, const LabeledDataset& ds);

// Searches B_{eps,p}(x) for a point classified differently from y.
AttackOutcome attack_point(const BaseClassifier& clf, std::span<const double> x, int y,
                           const AttackConfig& cfg);

// Fraction of samples with clf(x) = y that also survive the attack.
double adversarial_accuracy(const BaseClassifier& clf, const LabeledDataset& ds,
                            const AttackConfig& cfg, int workers = 1);

// Negation of attack success against the point's own prediction.
bool robust_at(const BaseClassifier& clf, std::span<const double> x, const AttackConfig& cfg);

struct RadiusEstimate {
  double radius = 0.0;
  bool saturated = false;  // no attack succeeded up to the expansion cap
};

// Bisects epsilon with robust_at as the predicate; an empirical upper bound
// on the certified radius. tol must lie in (1e-9, 1e-1).
RadiusEstimate robust_radius(const BaseClassifier& clf, std::span<const double> x, Norm p,
                             double tol, const AttackConfig& cfg);

}  // namespace noiselab
