#include "noiselab/augment.hpp"

#include <stdexcept>

namespace noiselab {

std::string to_string(const AugmentedDecision& d, const std::vector<std::string>& alphabet) {
  switch (d.kind) {
    case DecisionKind::tie: return "TIE";
    case DecisionKind::no_influence: return "NONE";
    case DecisionKind::label:
      if (d.label < 0 || d.label >= static_cast<int>(alphabet.size()))
        throw std::invalid_argument("decision label outside alphabet");
      return alphabet[d.label];
  }
  throw std::logic_error("unreachable decision kind");
}

AugmentedDecision decision_from_string(const std::string& text,
                                       const std::vector<std::string>& alphabet) {
  if (text == "TIE") return AugmentedDecision::tie();
  if (text == "NONE") return AugmentedDecision::none();
  for (std::size_t i = 0; i < alphabet.size(); ++i)
    if (alphabet[i] == text) return AugmentedDecision::make_label(static_cast<int>(i));
  throw std::invalid_argument("unknown decision string: '" + text + "'");
}

void check_labeling(const LabeledDataset& ds, const Labeling& h) {
  if (h.size() != ds.size())
    throw std::invalid_argument("labeling length does not match dataset size");
  for (int v : h)
    if (v < 0 || v >= static_cast<int>(ds.alphabet().size()))
      throw std::invalid_argument("labeling value outside alphabet");
}

std::vector<double> class_scores(const LabeledDataset& ds, const Labeling& h,
                                 const KernelSpec& k, std::span<const double> x) {
  check_labeling(ds, h);
  if (static_cast<std::size_t>(k.dim) != ds.dim() || x.size() != ds.dim())
    throw std::invalid_argument("kernel/query dimension mismatch with dataset");
  std::vector<double> scores(ds.alphabet().size(), 0.0);
  std::vector<double> diff(ds.dim());
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const auto xi = ds.point(i);
    for (std::size_t a = 0; a < diff.size(); ++a) diff[a] = x[a] - xi[a];
    scores[h[i]] += density(k, diff);
  }
  return scores;
}

AugmentedDecision decide(std::span<const double> scores) {
  double best = 0.0;
  int arg = -1;
  bool shared = false;
  for (std::size_t y = 0; y < scores.size(); ++y) {
    if (scores[y] > best) {
      best = scores[y];
      arg = static_cast<int>(y);
      shared = false;
    } else if (scores[y] == best && best > 0.0) {
      shared = true;
    }
  }
  if (arg < 0) return AugmentedDecision::none();
  if (shared) return AugmentedDecision::tie();
  return AugmentedDecision::make_label(arg);
}

AugmentedDecision augmented_classify(const LabeledDataset& ds, const Labeling& h,
                                     const KernelSpec& k, std::span<const double> x) {
  const auto scores = class_scores(ds, h, k, x);
  return decide(scores);
}

std::vector<double> kernel_matrix(const LabeledDataset& ds, const KernelSpec& k) {
  if (static_cast<std::size_t>(k.dim) != ds.dim())
    throw std::invalid_argument("kernel dimension mismatch with dataset");
  const std::size_t n = ds.size();
  std::vector<double> m(n * n);
  std::vector<double> diff(ds.dim());
  for (std::size_t i = 0; i < n; ++i) {
    const auto xi = ds.point(i);
    for (std::size_t j = 0; j < n; ++j) {
      const auto xj = ds.point(j);
      for (std::size_t a = 0; a < diff.size(); ++a) diff[a] = xi[a] - xj[a];
      m[i * n + j] = density(k, diff);
    }
  }
  return m;
}

void augmented_restriction_from_matrix(std::size_t n, int n_labels,
                                       const std::vector<double>& matrix, const Labeling& h,
                                       std::span<double> score_buf,
                                       std::span<AugmentedDecision> out) {
  for (std::size_t i = 0; i < n; ++i) {
    for (int y = 0; y < n_labels; ++y) score_buf[y] = 0.0;
    const double* row = matrix.data() + i * n;
    for (std::size_t j = 0; j < n; ++j) score_buf[h[j]] += row[j];
    out[i] = decide(score_buf.subspan(0, n_labels));
  }
}

std::vector<AugmentedDecision> augmented_restriction(const LabeledDataset& ds,
                                                     const Labeling& h, const KernelSpec& k) {
  check_labeling(ds, h);
  const auto m = kernel_matrix(ds, k);
  std::vector<AugmentedDecision> out(ds.size());
  std::vector<double> scores(ds.alphabet().size());
  augmented_restriction_from_matrix(ds.size(), static_cast<int>(ds.alphabet().size()), m, h,
                                    scores, out);
  return out;
}

bool influences(const KernelSpec& k, std::span<const double> xi, std::span<const double> xj) {
  if (xi.size() != xj.size()) throw std::invalid_argument("point dimension mismatch");
  std::vector<double> diff(xi.size());
  for (std::size_t a = 0; a < diff.size(); ++a) diff[a] = xj[a] - xi[a];
  return density(k, diff) > 0.0;
}

}  // namespace noiselab
