#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "noiselab/dataset.hpp"
#include "noiselab/kernels.hpp"

namespace noiselab {

// A hypothesis restricted to S_X: one alphabet id per training point.
using Labeling = std::vector<int>;

enum class DecisionKind : std::uint8_t { label, tie, no_influence };

// Outcome of the noise-augmented rule at a query point: a unique-argmax
// label, a tie between top scores, or no kernel mass from any sample.
struct AugmentedDecision {
  DecisionKind kind = DecisionKind::no_influence;
  int label = -1;

  static AugmentedDecision make_label(int id) { return {DecisionKind::label, id}; }
  static AugmentedDecision tie() { return {DecisionKind::tie, -1}; }
  static AugmentedDecision none() { return {DecisionKind::no_influence, -1}; }
  bool is_label(int id) const { return kind == DecisionKind::label && label == id; }
  friend bool operator==(const AugmentedDecision&, const AugmentedDecision&) = default;
};

// "TIE", "NONE", or the label string.
std::string to_string(const AugmentedDecision& d, const std::vector<std::string>& alphabet);
AugmentedDecision decision_from_string(const std::string& text,
                                       const std::vector<std::string>& alphabet);

void check_labeling(const LabeledDataset& ds, const Labeling& h);

// Per-class kernel mass at x: score(y) = sum over {x' in S_X : h(x') = y} of
// density(k, x - x'). Every alphabet label gets a slot (possibly zero); terms
// are accumulated in ascending point index so ties are reproducible.
std::vector<double> class_scores(const LabeledDataset& ds, const Labeling& h,
                                 const KernelSpec& k, std::span<const double> x);

// Argmax over class scores with exact tie detection.
AugmentedDecision decide(std::span<const double> scores);

AugmentedDecision augmented_classify(const LabeledDataset& ds, const Labeling& h,
                                     const KernelSpec& k, std::span<const double> x);

// Pairwise kernel matrix M[i*N+j] = density(k, x_i - x_j).
std::vector<double> kernel_matrix(const LabeledDataset& ds, const KernelSpec& k);

// h_{n_sigma} restricted to S_X: component i is the decision at x_i.
std::vector<AugmentedDecision> augmented_restriction(const LabeledDataset& ds,
                                                     const Labeling& h, const KernelSpec& k);

// Matrix-backed variant for enumeration loops; score_buf must hold
// n_labels doubles and out must hold N decisions.
void augmented_restriction_from_matrix(std::size_t n, int n_labels,
                                       const std::vector<double>& matrix, const Labeling& h,
                                       std::span<double> score_buf,
                                       std::span<AugmentedDecision> out);

// True iff x_i influences x_j, i.e. density(k, x_j - x_i) > 0.
bool influences(const KernelSpec& k, std::span<const double> xi, std::span<const double> xj);

}  // namespace noiselab
