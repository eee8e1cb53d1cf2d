#pragma once

#include <cstdint>
#include <vector>

#include "noiselab/augment.hpp"
#include "noiselab/dataset.hpp"
#include "noiselab/kernels.hpp"

namespace noiselab {

// Exhaustive comparison of |H_{S_X}| = |Y|^N against the noise-augmented
// class. realizable_after counts fixed points of the augmented restriction;
// image_size counts distinct tie-free restriction vectors; labelings with a
// Tie/NoInfluence entry count as not fixed and are excluded from the image.
struct CensusReport {
  std::uint64_t total = 0;
  std::uint64_t realizable_after = 0;
  std::uint64_t image_size = 0;
  bool equality = false;
  std::uint64_t tie_count = 0;
  std::vector<std::uint64_t> lost_indices;  // up to 16 smallest labeling indices
  std::vector<Labeling> lost_examples;      // decoded counterparts
};

// Encodes a labeling as a base-|Y| integer, point 0 least significant.
std::uint64_t encode_labeling(const Labeling& h, std::uint64_t n_labels);
Labeling decode_labeling(std::uint64_t index, std::uint64_t n_labels, std::size_t n);

CensusReport enumerate_census(const LabeledDataset& ds, const KernelSpec& k,
                              std::uint64_t cap = (std::uint64_t{1} << 24), int workers = 1);

// Builds the labeling that is +1 everywhere except -1 at `index` and reports
// whether the augmented restriction fixes it. The alphabet must contain both
// "-1" and "+1".
bool worst_case_check(const LabeledDataset& ds, const KernelSpec& k, std::size_t index);

// ceil(ln(class_size / delta) / eta).
std::int64_t pac_sample_bound(std::uint64_t class_size, double eta, double delta);

// Empirical Rademacher complexity of a class of {-1,+1}-valued labelings:
// the average over sign vectors of sup_h (2/N) sum_i s_i h(x_i). Exact mode
// enumerates all 2^N sign vectors (N <= 20); the Monte Carlo variant averages
// over m sampled sign vectors.
double empirical_rademacher_exact(const std::vector<std::vector<int>>& cls, int workers = 1);
double empirical_rademacher_monte_carlo(const std::vector<std::vector<int>>& cls,
                                        std::size_t m, std::uint64_t seed, int workers = 1);

}  // namespace noiselab
