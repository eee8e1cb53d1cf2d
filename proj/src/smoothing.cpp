#include "noiselab/smoothing.hpp"

#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>

#include <boost/math/distributions/beta.hpp>

#include "noiselab/parallel.hpp"

namespace noiselab {

BaseClassifier nearest_neighbor_classifier(const LabeledDataset& ds) {
  auto shared = std::make_shared<LabeledDataset>(ds);
  BaseClassifier clf;
  clf.alphabet = ds.alphabet();
  clf.classify = [shared](std::span<const double> x) {
    if (x.size() != shared->dim())
      throw std::invalid_argument("query dimension mismatch");
    double best = std::numeric_limits<double>::infinity();
    int label = -1;
    for (std::size_t i = 0; i < shared->size(); ++i) {
      const auto xi = shared->point(i);
      double s = 0.0;
      for (std::size_t a = 0; a < x.size(); ++a) {
        const double d = x[a] - xi[a];
        s += d * d;
      }
      if (s < best) {
        best = s;
        label = shared->label(i);
      }
    }
    return label;
  };
  return clf;
}

BaseClassifier halfspace_classifier(std::vector<double> weights, double bias) {
  if (weights.empty()) throw std::invalid_argument("halfspace needs a nonempty weight vector");
  auto w = std::make_shared<std::vector<double>>(std::move(weights));
  BaseClassifier clf;
  clf.alphabet = {"-1", "+1"};
  clf.classify = [w, bias](std::span<const double> x) {
    if (x.size() != w->size()) throw std::invalid_argument("query dimension mismatch");
    double s = bias;
    for (std::size_t a = 0; a < x.size(); ++a) s += (*w)[a] * x[a];
    return s >= 0.0 ? 1 : 0;
  };
  return clf;
}

BaseClassifier augmented_classifier(const LabeledDataset& ds, Labeling h,
                                    const KernelSpec& k, int fallback_label) {
  check_labeling(ds, h);
  if (fallback_label < 0 || fallback_label >= static_cast<int>(ds.alphabet().size()))
    throw std::invalid_argument("fallback label outside alphabet");
  auto shared_ds = std::make_shared<LabeledDataset>(ds);
  auto shared_h = std::make_shared<Labeling>(std::move(h));
  BaseClassifier clf;
  clf.alphabet = ds.alphabet();
  clf.classify = [shared_ds, shared_h, k, fallback_label](std::span<const double> x) {
    const auto decision = augmented_classify(*shared_ds, *shared_h, k, x);
    return decision.kind == DecisionKind::label ? decision.label : fallback_label;
  };
  return clf;
}

int majority_label(const LabeledDataset& ds) {
  std::vector<std::size_t> counts(ds.alphabet().size(), 0);
  for (std::size_t i = 0; i < ds.size(); ++i) ++counts[ds.label(i)];
  int best = 0;
  for (std::size_t a = 1; a < counts.size(); ++a)
    if (counts[a] > counts[best]) best = static_cast<int>(a);
  return best;
}

double clopper_pearson_lower(std::int64_t successes, std::int64_t n, double alpha) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  if (successes < 0 || successes > n)
    throw std::invalid_argument("successes must lie in [0, n]");
  if (!(alpha > 0.0 && alpha < 0.5)) throw std::invalid_argument("alpha must lie in (0, 0.5)");
  if (successes == 0) return 0.0;
  const boost::math::beta_distribution<double> dist(
      static_cast<double>(successes), static_cast<double>(n - successes + 1));
  return boost::math::quantile(dist, alpha);
}

SmoothedPrediction smooth_predict(const BaseClassifier& clf, const KernelSpec& k,
                                  std::span<const double> x, std::int64_t n, double alpha,
                                  rng::Stream& stream) {
  if (n < 1) throw std::invalid_argument("sample count must be >= 1");
  if (!(alpha > 0.0 && alpha < 0.5)) throw std::invalid_argument("alpha must lie in (0, 0.5)");
  if (x.size() != static_cast<std::size_t>(k.dim))
    throw std::invalid_argument("query dimension mismatch with kernel");

  SmoothedPrediction pred;
  pred.votes.assign(clf.alphabet.size(), 0);
  pred.n = n;
  pred.alpha = alpha;

  std::vector<double> noisy(x.size());
  std::vector<double> eta(x.size());
  for (std::int64_t t = 0; t < n; ++t) {
    sample_into(k, stream, eta);
    for (std::size_t a = 0; a < x.size(); ++a) noisy[a] = x[a] + eta[a];
    const int y = clf.classify(noisy);
    if (y < 0 || y >= static_cast<int>(pred.votes.size()))
      throw std::runtime_error("base classifier returned a label outside its alphabet");
    ++pred.votes[y];
  }

  int top = 0;
  bool shared = false;
  for (std::size_t y = 1; y < pred.votes.size(); ++y) {
    if (pred.votes[y] > pred.votes[top]) {
      top = static_cast<int>(y);
      shared = false;
    } else if (pred.votes[y] == pred.votes[top]) {
      shared = true;
    }
  }
  pred.top_prob_lower = clopper_pearson_lower(pred.votes[top], n, alpha);
  if (!shared && pred.top_prob_lower > 0.5) {
    pred.abstain = false;
    pred.label = top;
  }
  return pred;
}

SmoothAccuracy smooth_accuracy(const BaseClassifier& clf, const KernelSpec& k,
                               const LabeledDataset& eval, std::int64_t n, double alpha,
                               std::uint64_t seed, int workers) {
  if (clf.alphabet != eval.alphabet())
    throw std::invalid_argument("classifier and dataset alphabets differ");
  std::vector<std::uint8_t> correct(eval.size(), 0);
  std::vector<std::uint8_t> abstained(eval.size(), 0);
  parallel_for(eval.size(), workers, [&](std::size_t i) {
    rng::Stream stream = rng::derive(seed, i);
    const auto pred = smooth_predict(clf, k, eval.point(i), n, alpha, stream);
    abstained[i] = pred.abstain ? 1 : 0;
    correct[i] = (!pred.abstain && pred.label == eval.label(i)) ? 1 : 0;
  });
  std::size_t n_correct = 0, n_abstain = 0;
  for (std::size_t i = 0; i < eval.size(); ++i) {
    n_correct += correct[i];
    n_abstain += abstained[i];
  }
  return {static_cast<double>(n_correct) / static_cast<double>(eval.size()),
          static_cast<double>(n_abstain) / static_cast<double>(eval.size())};
}

}  // namespace noiselab
