#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "noiselab/augment.hpp"
#include "noiselab/dataset.hpp"
#include "noiselab/kernels.hpp"
#include "noiselab/rng.hpp"

namespace noiselab {

// A deterministic, total decision function from points to alphabet ids.
struct BaseClassifier {
  std::vector<std::string> alphabet;
  std::function<int(std::span<const double>)> classify;
};

// 1-NN over the training points, l2 metric, lowest index wins ties.
BaseClassifier nearest_neighbor_classifier(const LabeledDataset& ds);

// sign(w.x + b) mapped onto the alphabet {"-1", "+1"}; sign(0) counts as +1.
BaseClassifier halfspace_classifier(std::vector<double> weights, double bias);

// Noise-augmented rule made total via a fallback label for Tie/NoInfluence.
BaseClassifier augmented_classifier(const LabeledDataset& ds, Labeling h,
                                    const KernelSpec& k, int fallback_label);

// Most frequent training label; lowest id on ties.
int majority_label(const LabeledDataset& ds);

struct SmoothedPrediction {
  std::vector<std::int64_t> votes;  // per alphabet id, sums to n
  std::int64_t n = 0;
  double alpha = 0.0;
  bool abstain = true;
  int label = -1;               // valid when !abstain
  double top_prob_lower = 0.0;  // one-sided CP lower bound for the top class
};

// Exact one-sided Clopper-Pearson lower confidence bound at level alpha.
double clopper_pearson_lower(std::int64_t successes, std::int64_t n, double alpha);

// Votes clf(x + eta) over n draws eta ~ k; emits the plurality label only if
// it is unique and its CP lower bound exceeds 1/2, otherwise abstains.
SmoothedPrediction smooth_predict(const BaseClassifier& clf, const KernelSpec& k,
                                  std::span<const double> x, std::int64_t n, double alpha,
                                  rng::Stream& stream);

struct SmoothAccuracy {
  double accuracy = 0.0;     // abstentions count as incorrect
  double abstain_rate = 0.0;
};

// Per-sample smooth_predict with sub-streams derived from (seed, index).
SmoothAccuracy smooth_accuracy(const BaseClassifier& clf, const KernelSpec& k,
                               const LabeledDataset& eval, std::int64_t n, double alpha,
                               std::uint64_t seed, int workers = 1);

}  // namespace noiselab
