#include "noiselab/census.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "noiselab/parallel.hpp"
#include "noiselab/rng.hpp"

namespace noiselab {

std::uint64_t encode_labeling(const Labeling& h, std::uint64_t n_labels) {
  std::uint64_t index = 0;
  for (std::size_t i = h.size(); i-- > 0;)
    index = index * n_labels + static_cast<std::uint64_t>(h[i]);
  return index;
}

Labeling decode_labeling(std::uint64_t index, std::uint64_t n_labels, std::size_t n) {
  Labeling h(n);
  for (std::size_t i = 0; i < n; ++i) {
    h[i] = static_cast<int>(index % n_labels);
    index /= n_labels;
  }
  return h;
}

namespace {

constexpr std::size_t kMaxLost = 16;

std::uint64_t checked_pow(std::uint64_t base, std::size_t exp, std::uint64_t cap) {
  std::uint64_t value = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (value > cap / base) return cap + 1;  // value * base would exceed cap
    value *= base;
  }
  return value;
}

struct ChunkTally {
  std::uint64_t realizable = 0;
  std::uint64_t ties = 0;
  std::vector<std::uint64_t> lost;  // ascending, at most kMaxLost
};

}  // namespace

CensusReport enumerate_census(const LabeledDataset& ds, const KernelSpec& k,
                              std::uint64_t cap, int workers) {
  if (ds.alphabet().size() < 2)
    throw std::invalid_argument("census requires an alphabet of size >= 2");
  const std::size_t n = ds.size();
  const std::uint64_t n_labels = ds.alphabet().size();
  const std::uint64_t total = checked_pow(n_labels, n, cap);
  if (total > cap)
    throw std::invalid_argument("census size |Y|^N exceeds cap; need cap >= " +
                                std::to_string(total));

  const auto matrix = kernel_matrix(ds, k);

  // Image membership bitmap over labeling indices; atomic OR keeps parallel
  // merges order-independent.
  std::vector<std::atomic<std::uint64_t>> image_bits((total + 63) / 64);
  for (auto& w : image_bits) w.store(0, std::memory_order_relaxed);

  const std::size_t n_chunks =
      std::max<std::size_t>(1, std::min<std::size_t>(static_cast<std::size_t>(workers) * 8,
                                                     static_cast<std::size_t>(total)));
  const std::uint64_t chunk_len = (total + n_chunks - 1) / n_chunks;
  std::vector<ChunkTally> tallies(n_chunks);

  parallel_for(n_chunks, workers, [&](std::size_t c) {
    ChunkTally& tally = tallies[c];
    const std::uint64_t begin = static_cast<std::uint64_t>(c) * chunk_len;
    const std::uint64_t end = std::min(total, begin + chunk_len);
    if (begin >= end) return;

    Labeling h = decode_labeling(begin, n_labels, n);
    std::vector<double> scores(n_labels);
    std::vector<AugmentedDecision> restriction(n);

    for (std::uint64_t index = begin; index < end; ++index) {
      augmented_restriction_from_matrix(n, static_cast<int>(n_labels), matrix, h, scores,
                                        restriction);
      bool total_fn = true;
      bool fixed = true;
      for (std::size_t i = 0; i < n; ++i) {
        if (restriction[i].kind != DecisionKind::label) {
          total_fn = false;
          fixed = false;
          break;
        }
        if (restriction[i].label != h[i]) fixed = false;
      }
      if (total_fn) {
        std::uint64_t image_index = 0;
        for (std::size_t i = n; i-- > 0;)
          image_index = image_index * n_labels + static_cast<std::uint64_t>(
                                                     restriction[i].label);
        image_bits[image_index / 64].fetch_or(std::uint64_t{1} << (image_index % 64),
                                              std::memory_order_relaxed);
      } else {
        ++tally.ties;
      }
      if (fixed) {
        ++tally.realizable;
      } else if (tally.lost.size() < kMaxLost) {
        tally.lost.push_back(index);
      }

      // Odometer step to the next labeling.
      for (std::size_t i = 0; i < n; ++i) {
        if (static_cast<std::uint64_t>(++h[i]) < n_labels) break;
        h[i] = 0;
      }
    }
  });

  CensusReport report;
  report.total = total;
  std::vector<std::uint64_t> lost_all;
  for (const auto& tally : tallies) {
    report.realizable_after += tally.realizable;
    report.tie_count += tally.ties;
    lost_all.insert(lost_all.end(), tally.lost.begin(), tally.lost.end());
  }
  std::sort(lost_all.begin(), lost_all.end());
  if (lost_all.size() > kMaxLost) lost_all.resize(kMaxLost);
  report.lost_indices = lost_all;
  for (std::uint64_t index : lost_all)
    report.lost_examples.push_back(decode_labeling(index, n_labels, n));

  std::uint64_t image = 0;
  for (const auto& w : image_bits)
    image += static_cast<std::uint64_t>(std::popcount(w.load(std::memory_order_relaxed)));
  report.image_size = image;
  report.equality = report.realizable_after == report.total;
  return report;
}

bool worst_case_check(const LabeledDataset& ds, const KernelSpec& k, std::size_t index) {
  if (index >= ds.size()) throw std::invalid_argument("worst-case index out of range");
  // The probe labeling lives in {-1,+1}; both labels must exist.
  int minus = -1, plus = -1;
  for (std::size_t a = 0; a < ds.alphabet().size(); ++a) {
    if (ds.alphabet()[a] == "-1") minus = static_cast<int>(a);
    if (ds.alphabet()[a] == "+1") plus = static_cast<int>(a);
  }
  if (minus < 0 || plus < 0)
    throw std::invalid_argument("worst_case_check requires labels -1 and +1 in the alphabet");
  Labeling h(ds.size(), plus);
  h[index] = minus;
  const auto restriction = augmented_restriction(ds, h, k);
  for (std::size_t i = 0; i < ds.size(); ++i)
    if (!restriction[i].is_label(h[i])) return false;
  return true;
}

std::int64_t pac_sample_bound(std::uint64_t class_size, double eta, double delta) {
  if (class_size < 1) throw std::invalid_argument("class_size must be >= 1");
  if (!(eta > 0.0 && eta < 1.0)) throw std::invalid_argument("eta must lie in (0,1)");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0,1)");
  const double bound = (std::log(static_cast<double>(class_size)) - std::log(delta)) / eta;
  return static_cast<std::int64_t>(std::ceil(bound));
}

namespace {

// Class members as +1-bit masks; sup_h sum_i s_i h_i = N - 2 min_h popcount(s ^ h).
std::vector<std::uint64_t> class_masks(const std::vector<std::vector<int>>& cls,
                                       std::size_t* n_out) {
  if (cls.empty()) throw std::invalid_argument("hypothesis class must be nonempty");
  const std::size_t n = cls.front().size();
  if (n == 0 || n > 63) throw std::invalid_argument("labelings must have 1..63 points");
  std::vector<std::uint64_t> masks;
  masks.reserve(cls.size());
  for (const auto& h : cls) {
    if (h.size() != n) throw std::invalid_argument("labelings must share a common length");
    std::uint64_t m = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (h[i] == 1)
        m |= std::uint64_t{1} << i;
      else if (h[i] != -1)
        throw std::invalid_argument("labeling values must be -1 or +1");
    }
    masks.push_back(m);
  }
  *n_out = n;
  return masks;
}

std::int64_t sup_correlation(const std::vector<std::uint64_t>& masks, std::size_t n,
                             std::uint64_t signs) {
  int best = std::numeric_limits<int>::max();
  for (std::uint64_t h : masks) {
    best = std::min(best, std::popcount(signs ^ h));
    if (best == 0) break;  // the sup is already saturated
  }
  return static_cast<std::int64_t>(n) - 2 * static_cast<std::int64_t>(best);
}

}  // namespace

double empirical_rademacher_exact(const std::vector<std::vector<int>>& cls, int workers) {
  std::size_t n = 0;
  const auto masks = class_masks(cls, &n);
  if (n > 20) throw std::invalid_argument("exact mode requires 2^N <= 2^20");
  const std::uint64_t count = std::uint64_t{1} << n;

  const std::size_t n_chunks = std::max<std::size_t>(
      1, std::min<std::size_t>(static_cast<std::size_t>(workers) * 8,
                               static_cast<std::size_t>(count)));
  const std::uint64_t chunk_len = (count + n_chunks - 1) / n_chunks;
  std::vector<std::int64_t> partial(n_chunks, 0);
  parallel_for(n_chunks, workers, [&](std::size_t c) {
    const std::uint64_t begin = static_cast<std::uint64_t>(c) * chunk_len;
    const std::uint64_t end = std::min(count, begin + chunk_len);
    std::int64_t acc = 0;
    for (std::uint64_t s = begin; s < end; ++s) acc += sup_correlation(masks, n, s);
    partial[c] = acc;
  });
  std::int64_t sum = 0;
  for (std::int64_t p : partial) sum += p;
  // Integer totals keep the full-class value exactly 2.
  return 2.0 * static_cast<double>(sum) /
         (static_cast<double>(n) * static_cast<double>(count));
}

double empirical_rademacher_monte_carlo(const std::vector<std::vector<int>>& cls,
                                        std::size_t m, std::uint64_t seed, int workers) {
  std::size_t n = 0;
  const auto masks = class_masks(cls, &n);
  if (m < 1) throw std::invalid_argument("monte carlo sample count must be >= 1");

  std::vector<std::int64_t> sups(m, 0);
  parallel_for(m, workers, [&](std::size_t t) {
    rng::Stream stream = rng::derive(seed, t);
    const std::uint64_t signs = stream.next_u64() & ((std::uint64_t{1} << n) - 1);
    sups[t] = sup_correlation(masks, n, signs);
  });
  std::int64_t sum = 0;
  for (std::int64_t s : sups) sum += s;
  return 2.0 * static_cast<double>(sum) / (static_cast<double>(n) * static_cast<double>(m));
}

}  // namespace noiselab
