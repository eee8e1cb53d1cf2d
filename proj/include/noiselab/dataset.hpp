#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace noiselab {

enum class DatasetFormat { csv, json };

// Training sequence S: an N x d point matrix S_X plus per-point labels over a
// finite ordered alphabet. Immutable after construction; rows must be
// pairwise distinct and every label must name an alphabet entry.
class LabeledDataset {
 public:
  LabeledDataset(std::vector<double> points, std::size_t dim, std::vector<int> labels,
                 std::vector<std::string> alphabet);

  std::size_t size() const { return labels_.size(); }
  std::size_t dim() const { return dim_; }
  std::span<const double> point(std::size_t i) const {
    return {points_.data() + i * dim_, dim_};
  }
  int label(std::size_t i) const { return labels_[i]; }
  const std::vector<int>& labels() const { return labels_; }
  const std::vector<std::string>& alphabet() const { return alphabet_; }
  const std::vector<double>& raw_points() const { return points_; }

  // Index of a label name in the alphabet; throws if unknown.
  int label_id(const std::string& name) const;

 private:
  std::vector<double> points_;
  std::size_t dim_;
  std::vector<int> labels_;
  std::vector<std::string> alphabet_;
};

// CSV: header "d=<int>,labels=<l1>|<l2>|...", then one "x1,...,xd,label" row
// per sample. JSON mirrors the same fields. Both round-trip doubles exactly.
LabeledDataset load_dataset(const std::filesystem::path& path, DatasetFormat format);
void save_dataset(const LabeledDataset& ds, const std::filesystem::path& path,
                  DatasetFormat format);

LabeledDataset dataset_from_csv_text(const std::string& text);
LabeledDataset dataset_from_json_text(const std::string& text);
std::string dataset_to_csv_text(const LabeledDataset& ds);
std::string dataset_to_json_text(const LabeledDataset& ds);

// The nine 2-D points of the motivating example; index 0 carries the lone -1.
LabeledDataset demo_nine_points();

// Isotropic normal clusters with centers on a lattice with spacing
// `separation`; label = cluster id. Deterministic per seed.
LabeledDataset synth_clusters(int n_clusters, int points_per_cluster, int dim,
                              double spread, double separation, std::uint64_t seed);

// Points unchanged; every label redrawn uniformly from the alphabet.
LabeledDataset randomize_labels(const LabeledDataset& ds, std::uint64_t seed);

double min_pairwise_distance(const LabeledDataset& ds);
std::vector<double> second_neighbor_distances(const LabeledDataset& ds);

// Shortest-round-trip decimal rendering used by all text artifacts.
std::string format_double(double v);

}  // namespace noiselab
