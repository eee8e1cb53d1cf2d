#include "noiselab/robustness.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "noiselab/parallel.hpp"
#include "noiselab/rng.hpp"

namespace noiselab {

Norm norm_from_string(const std::string& name) {
  if (name == "1") return Norm::l1;
  if (name == "2") return Norm::l2;
  if (name == "inf") return Norm::linf;
  throw std::invalid_argument("norm order must be 1, 2, or inf");
}

std::string to_string(Norm p) {
  switch (p) {
    case Norm::l1: return "1";
    case Norm::l2: return "2";
    case Norm::linf: return "inf";
  }
  throw std::logic_error("unreachable norm");
}

double lp_norm(std::span<const double> v, Norm p) {
  switch (p) {
    case Norm::l1: {
      double s = 0.0;
      for (double x : v) s += std::abs(x);
      return s;
    }
    case Norm::l2: {
      double s = 0.0;
      for (double x : v) s += x * x;
      return std::sqrt(s);
    }
    case Norm::linf: {
      double s = 0.0;
      for (double x : v) s = std::max(s, std::abs(x));
      return s;
    }
  }
  throw std::logic_error("unreachable norm");
}

namespace {

// Unit-norm direction on the lp sphere.
void sphere_direction(Norm p, rng::Stream& stream, std::span<double> u) {
  const std::size_t d = u.size();
  switch (p) {
    case Norm::l2: {
      double norm = 0.0;
      do {
        for (double& v : u) v = stream.normal();
        norm = lp_norm(u, Norm::l2);
      } while (norm == 0.0);
      for (double& v : u) v /= norm;
      return;
    }
    case Norm::linf: {
      for (double& v : u) v = 2.0 * stream.uniform01() - 1.0;
      const std::size_t j = static_cast<std::size_t>(stream.below(d));
      u[j] = (stream.next_u64() & 1) ? 1.0 : -1.0;
      return;
    }
    case Norm::l1: {
      double total = 0.0;
      for (double& v : u) {
        v = stream.exponential();
        total += v;
      }
      for (double& v : u) {
        v /= total;
        if (stream.next_u64() & 1) v = -v;
      }
      return;
    }
  }
}

// Absolute eighth-octave radius ladder below the budget, largest first, plus
// the budget sphere itself. Budget-independent grid points keep candidate
// sets nested across budgets.
std::vector<double> radius_ladder(double epsilon) {
  std::vector<double> radii;
  radii.push_back(epsilon);
  const double i_max = std::floor(8.0 * std::log2(epsilon));
  for (int step = 0; step <= 96; ++step) {
    const double r = std::exp2((i_max - static_cast<double>(step)) / 8.0);
    if (r < epsilon) radii.push_back(r);
  }
  return radii;
}

// Scales z - x back inside the budget if rounding nudged it out.
void clamp_budget(std::span<const double> x, Norm p, double epsilon,
                  std::vector<double>& z) {
  std::vector<double> delta(z.size());
  for (std::size_t a = 0; a < z.size(); ++a) delta[a] = z[a] - x[a];
  const double norm = lp_norm(delta, p);
  if (norm <= epsilon) return;
  const double shrink = (epsilon / norm) * (1.0 - 1e-15);
  for (std::size_t a = 0; a < z.size(); ++a) z[a] = x[a] + shrink * delta[a];
}

}  // namespace

double natural_accuracy(const BaseClassifier& clf, const LabeledDataset& ds) {
  if (clf.alphabet != ds.alphabet())
    throw std::invalid_argument("classifier and dataset alphabets differ");
  std::size_t correct = 0;
  for (std::size_t i = 0; i < ds.size(); ++i)
    if (clf.classify(ds.point(i)) == ds.label(i)) ++correct;
  return static_cast<double>(correct) / static_cast<double>(ds.size());
}

AttackOutcome attack_point(const BaseClassifier& clf, std::span<const double> x, int y,
                           const AttackConfig& cfg) {
  if (cfg.epsilon < 0.0) throw std::invalid_argument("epsilon must be >= 0");
  if (cfg.n_random < 1) throw std::invalid_argument("n_random must be >= 1");

  AttackOutcome out;
  if (clf.classify(x) != y) {
    out.success = true;
    out.adversarial_point.assign(x.begin(), x.end());
    return out;
  }
  if (cfg.epsilon == 0.0) return out;

  const std::size_t d = x.size();
  const auto radii = radius_ladder(cfg.epsilon);
  rng::Stream stream = rng::derive(cfg.seed, 0x61747461);

  std::vector<double> u(d);
  std::vector<double> z(d);
  for (int k = 0; k < cfg.n_random && !out.success; ++k) {
    sphere_direction(cfg.p, stream, u);
    for (double r : radii) {
      for (std::size_t a = 0; a < d; ++a) z[a] = x[a] + r * u[a];
      clamp_budget(x, cfg.p, cfg.epsilon, z);
      if (clf.classify(z) != y) {
        out.success = true;
        out.adversarial_point = z;
        break;
      }
    }
  }
  if (!out.success) return out;

  // Bisect toward the decision boundary to shrink the perturbation, then try
  // zeroing coordinates outright.
  std::vector<double> delta(d);
  for (std::size_t a = 0; a < d; ++a) delta[a] = out.adversarial_point[a] - x[a];
  double t_lo = 0.0, t_hi = 1.0;
  for (int step = 0; step < cfg.n_refine; ++step) {
    const double mid = 0.5 * (t_lo + t_hi);
    for (std::size_t a = 0; a < d; ++a) z[a] = x[a] + mid * delta[a];
    if (clf.classify(z) != y)
      t_hi = mid;
    else
      t_lo = mid;
  }
  for (std::size_t a = 0; a < d; ++a)
    out.adversarial_point[a] = x[a] + t_hi * delta[a];
  for (std::size_t a = 0; a < d; ++a) {
    const double kept = out.adversarial_point[a];
    if (kept == x[a]) continue;
    out.adversarial_point[a] = x[a];
    if (clf.classify(out.adversarial_point) == y) out.adversarial_point[a] = kept;
  }
  clamp_budget(x, cfg.p, cfg.epsilon, out.adversarial_point);
  if (clf.classify(out.adversarial_point) == y) {
    // Refinement overshot; fall back to the bisection endpoint.
    for (std::size_t a = 0; a < d; ++a) out.adversarial_point[a] = x[a] + t_hi * delta[a];
    clamp_budget(x, cfg.p, cfg.epsilon, out.adversarial_point);
  }
  return out;
}

double adversarial_accuracy(const BaseClassifier& clf, const LabeledDataset& ds,
                            const AttackConfig& cfg, int workers) {
  if (clf.alphabet != ds.alphabet())
    throw std::invalid_argument("classifier and dataset alphabets differ");
  std::vector<std::uint8_t> survived(ds.size(), 0);
  parallel_for(ds.size(), workers, [&](std::size_t i) {
    AttackConfig local = cfg;
    rng::Stream mix = rng::derive(cfg.seed, 0x61647661, i);
    local.seed = mix.next_u64();
    if (clf.classify(ds.point(i)) != ds.label(i)) return;
    const auto outcome = attack_point(clf, ds.point(i), ds.label(i), local);
    survived[i] = outcome.success ? 0 : 1;
  });
  std::size_t count = 0;
  for (auto s : survived) count += s;
  return static_cast<double>(count) / static_cast<double>(ds.size());
}

bool robust_at(const BaseClassifier& clf, std::span<const double> x,
               const AttackConfig& cfg) {
  const int y = clf.classify(x);
  return !attack_point(clf, x, y, cfg).success;
}

RadiusEstimate robust_radius(const BaseClassifier& clf, std::span<const double> x, Norm p,
                             double tol, const AttackConfig& cfg) {
  if (!(tol > 1e-9 && tol < 1e-1)) throw std::invalid_argument("tol must lie in (1e-9, 1e-1)");
  AttackConfig probe = cfg;
  probe.p = p;

  const double cap = std::exp2(20);
  double hi = std::max(tol, 1e-3);
  probe.epsilon = hi;
  while (robust_at(clf, x, probe)) {
    hi *= 2.0;
    if (hi > cap) return {hi / 2.0, true};
    probe.epsilon = hi;
  }

  double lo = 0.0;
  for (int step = 0; step < 200 && (hi - lo) > tol * hi; ++step) {
    const double mid = 0.5 * (lo + hi);
    probe.epsilon = mid;
    if (robust_at(clf, x, probe))
      lo = mid;
    else
      hi = mid;
  }
  return {lo, false};
}

}  // namespace noiselab
