#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "noiselab/census.hpp"
#include "noiselab/dataset.hpp"
#include "noiselab/kernels.hpp"
#include "noiselab/robustness.hpp"
#include "noiselab/smoothing.hpp"

namespace noiselab {

// Raised for malformed configs; the CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct DatasetSpec {
  bool demo = false;
  std::string path;  // used when nonempty
  DatasetFormat format = DatasetFormat::csv;
  // generator parameters, used when neither demo nor path is set
  int n_clusters = 2;
  int points_per_cluster = 30;
  int dim = 2;
  double spread = 1.0;
  double separation = 10.0;
};

struct ClassifierSpec {
  std::string type = "augmented";  // augmented | nn | halfspace
  std::string fallback;            // augmented: empty means majority label
  std::vector<double> halfspace_w;
  double halfspace_b = 0.0;
};

struct SweepConfig {
  DatasetSpec dataset;
  KernelFamily family = KernelFamily::gaussian;
  std::vector<double> sigma_list;
  ClassifierSpec classifier;
  std::int64_t smooth_n = 1000;
  double smooth_alpha = 0.001;
  std::vector<std::pair<Norm, double>> attacks;
  int attack_n_random = 64;
  int attack_n_refine = 20;
  double split = 0.5;
  int trials = 30;
  std::uint64_t seed = 1;
  bool census_enabled = false;
  std::uint64_t census_cap = std::uint64_t{1} << 24;
  std::string out_dir = "out";
};

SweepConfig sweep_config_from_json_text(const std::string& text);
// Canonical resolved form (all defaults filled, keys sorted by nlohmann).
std::string sweep_config_canonical_json(const SweepConfig& cfg);

// FNV-1a 64-bit hash, lowercase hex; echoed on every CSV row.
std::string fnv1a_hex(const std::string& data);

LabeledDataset materialize_dataset(const DatasetSpec& spec, std::uint64_t seed);

// Deterministic shuffle by seed, then prefix split into (train, test).
std::pair<LabeledDataset, LabeledDataset> split_dataset(const LabeledDataset& ds,
                                                        double fraction,
                                                        std::uint64_t seed);

BaseClassifier build_classifier(const ClassifierSpec& spec, const LabeledDataset& train,
                                const KernelSpec& kernel);

struct SweepRow {
  double sigma = 0.0;
  double train_acc = 0.0;
  double test_acc = 0.0;
  double gap = 0.0;
  std::vector<double> adv_acc;  // aligned with cfg.attacks
  double smoothed_train_acc = 0.0;
  double smoothed_test_acc = 0.0;
  double abstain_rate = 0.0;  // on the test split
  std::optional<std::uint64_t> census_size;
};

struct GeneralizationReport {
  std::vector<SweepRow> rows;
  std::string config_hash;
  std::vector<std::pair<Norm, double>> attacks;
};

GeneralizationReport run_sweep(const SweepConfig& cfg, int workers = 1);
std::string sweep_csv_text(const GeneralizationReport& report);

struct RandomLabelRow {
  int trial = 0;
  double sigma = 0.0;
  double train_acc = 0.0;
  double test_acc = 0.0;
  double smoothed_train_acc = 0.0;
  double smoothed_test_acc = 0.0;
  double abstain_rate_train = 0.0;
  double abstain_rate_test = 0.0;
};

struct RandomLabelReport {
  std::vector<RandomLabelRow> rows;
  std::string config_hash;
  std::vector<double> sigma_list;
  std::vector<double> mean_train_acc;  // per sigma, over trials
  std::vector<double> mean_test_acc;
  std::vector<double> mean_smoothed_train_acc;
  std::vector<double> mean_smoothed_test_acc;
  // One-sided paired comparison of unsmoothed train accuracy, smallest vs
  // largest sigma.
  double paired_t_stat = 0.0;
  double paired_p_value = 1.0;
  int trials_decreased = 0;  // trials where acc(largest) < acc(smallest)
};

RandomLabelReport run_random_label(const SweepConfig& cfg, int workers = 1);
std::string random_label_csv_text(const RandomLabelReport& report);
std::string random_label_summary_json(const RandomLabelReport& report);

}  // namespace noiselab
