#include "noiselab/harness.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <numeric>

#include <boost/math/distributions/students_t.hpp>

#include "json.hpp"

#include "noiselab/augment.hpp"
#include "noiselab/parallel.hpp"
#include "noiselab/rng.hpp"

namespace noiselab {

namespace {

using nlohmann::json;

json dataset_spec_to_json(const DatasetSpec& s) {
  json j;
  j["demo"] = s.demo;
  j["path"] = s.path;
  j["format"] = s.format == DatasetFormat::csv ? "csv" : "json";
  j["generator"] = {{"clusters", s.n_clusters},
                    {"per_cluster", s.points_per_cluster},
                    {"dim", s.dim},
                    {"spread", s.spread},
                    {"separation", s.separation}};
  return j;
}

DatasetSpec dataset_spec_from_json(const json& j) {
  DatasetSpec s;
  if (j.contains("demo")) s.demo = j["demo"].get<bool>();
  if (j.contains("path")) s.path = j["path"].get<std::string>();
  if (j.contains("format")) {
    const auto f = j["format"].get<std::string>();
    if (f == "csv")
      s.format = DatasetFormat::csv;
    else if (f == "json")
      s.format = DatasetFormat::json;
    else
      throw ConfigError("dataset format must be csv or json");
  }
  if (j.contains("generator")) {
    const auto& g = j["generator"];
    if (g.contains("clusters")) s.n_clusters = g["clusters"].get<int>();
    if (g.contains("per_cluster")) s.points_per_cluster = g["per_cluster"].get<int>();
    if (g.contains("dim")) s.dim = g["dim"].get<int>();
    if (g.contains("spread")) s.spread = g["spread"].get<double>();
    if (g.contains("separation")) s.separation = g["separation"].get<double>();
  }
  return s;
}

}  // namespace

SweepConfig sweep_config_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad config JSON: ") + e.what());
  }
  SweepConfig cfg;
  try {
    if (j.contains("dataset")) cfg.dataset = dataset_spec_from_json(j["dataset"]);
    if (j.contains("kernel_family"))
      cfg.family = kernel_family_from_string(j["kernel_family"].get<std::string>());
    if (j.contains("sigma_list")) cfg.sigma_list = j["sigma_list"].get<std::vector<double>>();
    if (j.contains("classifier")) {
      const auto& c = j["classifier"];
      if (c.contains("type")) cfg.classifier.type = c["type"].get<std::string>();
      if (c.contains("fallback")) cfg.classifier.fallback = c["fallback"].get<std::string>();
      if (c.contains("w")) cfg.classifier.halfspace_w = c["w"].get<std::vector<double>>();
      if (c.contains("b")) cfg.classifier.halfspace_b = c["b"].get<double>();
    }
    if (j.contains("smoothing")) {
      const auto& s = j["smoothing"];
      if (s.contains("n")) cfg.smooth_n = s["n"].get<std::int64_t>();
      if (s.contains("alpha")) cfg.smooth_alpha = s["alpha"].get<double>();
    }
    if (j.contains("attacks")) {
      for (const auto& a : j["attacks"])
        cfg.attacks.emplace_back(norm_from_string(a.at("p").get<std::string>()),
                                 a.at("eps").get<double>());
    }
    if (j.contains("attack")) {
      const auto& a = j["attack"];
      if (a.contains("n_random")) cfg.attack_n_random = a["n_random"].get<int>();
      if (a.contains("n_refine")) cfg.attack_n_refine = a["n_refine"].get<int>();
    }
    if (j.contains("split")) cfg.split = j["split"].get<double>();
    if (j.contains("trials")) cfg.trials = j["trials"].get<int>();
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("census")) {
      const auto& c = j["census"];
      if (c.contains("enabled")) cfg.census_enabled = c["enabled"].get<bool>();
      if (c.contains("cap")) cfg.census_cap = c["cap"].get<std::uint64_t>();
    }
    if (j.contains("out_dir")) cfg.out_dir = j["out_dir"].get<std::string>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad config value: ") + e.what());
  }
  if (cfg.sigma_list.empty()) throw ConfigError("sigma_list must be nonempty");
  for (double s : cfg.sigma_list)
    if (!(s > 0.0)) throw ConfigError("sigma_list entries must be positive");
  if (!(cfg.split > 0.0 && cfg.split < 1.0)) throw ConfigError("split must lie in (0,1)");
  if (cfg.trials < 1) throw ConfigError("trials must be >= 1");
  if (cfg.smooth_n < 1) throw ConfigError("smoothing n must be >= 1");
  if (!(cfg.smooth_alpha > 0.0 && cfg.smooth_alpha < 0.5))
    throw ConfigError("smoothing alpha must lie in (0, 0.5)");
  return cfg;
}

std::string sweep_config_canonical_json(const SweepConfig& cfg) {
  json j;
  j["dataset"] = dataset_spec_to_json(cfg.dataset);
  j["kernel_family"] = to_string(cfg.family);
  j["sigma_list"] = cfg.sigma_list;
  j["classifier"] = {{"type", cfg.classifier.type},
                     {"fallback", cfg.classifier.fallback},
                     {"w", cfg.classifier.halfspace_w},
                     {"b", cfg.classifier.halfspace_b}};
  j["smoothing"] = {{"n", cfg.smooth_n}, {"alpha", cfg.smooth_alpha}};
  json attacks = json::array();
  for (const auto& [p, eps] : cfg.attacks)
    attacks.push_back({{"p", to_string(p)}, {"eps", eps}});
  j["attacks"] = std::move(attacks);
  j["attack"] = {{"n_random", cfg.attack_n_random}, {"n_refine", cfg.attack_n_refine}};
  j["split"] = cfg.split;
  j["trials"] = cfg.trials;
  j["seed"] = cfg.seed;
  j["census"] = {{"enabled", cfg.census_enabled}, {"cap", cfg.census_cap}};
  return j.dump();
}

std::string fnv1a_hex(const std::string& data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  static const char* digits = "0123456789abcdef";
  for (int i = 15; i >= 0; --i) {
    buf[i] = digits[h & 0xF];
    h >>= 4;
  }
  buf[16] = '\0';
  return std::string(buf);
}

LabeledDataset materialize_dataset(const DatasetSpec& spec, std::uint64_t seed) {
  if (spec.demo) return demo_nine_points();
  if (!spec.path.empty()) return load_dataset(spec.path, spec.format);
  return synth_clusters(spec.n_clusters, spec.points_per_cluster, spec.dim, spec.spread,
                        spec.separation, seed);
}

std::pair<LabeledDataset, LabeledDataset> split_dataset(const LabeledDataset& ds,
                                                        double fraction,
                                                        std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction < 1.0))
    throw std::invalid_argument("split fraction must lie in (0,1)");
  if (ds.size() < 2) throw std::invalid_argument("cannot split a single-sample dataset");
  std::vector<std::size_t> order(ds.size());
  std::iota(order.begin(), order.end(), 0);
  rng::Stream stream = rng::derive(seed, 0x73706c69);
  for (std::size_t i = order.size(); i > 1; --i)
    std::swap(order[i - 1], order[stream.below(i)]);

  std::size_t n_train = static_cast<std::size_t>(
      std::llround(fraction * static_cast<double>(ds.size())));
  n_train = std::clamp<std::size_t>(n_train, 1, ds.size() - 1);

  auto subset = [&](std::size_t begin, std::size_t end) {
    std::vector<double> points;
    std::vector<int> labels;
    for (std::size_t r = begin; r < end; ++r) {
      const auto p = ds.point(order[r]);
      points.insert(points.end(), p.begin(), p.end());
      labels.push_back(ds.label(order[r]));
    }
    return LabeledDataset(std::move(points), ds.dim(), std::move(labels), ds.alphabet());
  };
  return {subset(0, n_train), subset(n_train, ds.size())};
}

BaseClassifier build_classifier(const ClassifierSpec& spec, const LabeledDataset& train,
                                const KernelSpec& kernel) {
  if (spec.type == "nn") return nearest_neighbor_classifier(train);
  if (spec.type == "halfspace") {
    if (spec.halfspace_w.size() != train.dim())
      throw ConfigError("halfspace weight length must match the dataset dimension");
    return halfspace_classifier(spec.halfspace_w, spec.halfspace_b);
  }
  if (spec.type == "augmented") {
    const int fallback =
        spec.fallback.empty() ? majority_label(train) : train.label_id(spec.fallback);
    return augmented_classifier(train, train.labels(), kernel, fallback);
  }
  throw ConfigError("unknown classifier type: " + spec.type);
}

GeneralizationReport run_sweep(const SweepConfig& cfg, int workers) {
  const std::string canonical = sweep_config_canonical_json(cfg);
  GeneralizationReport report;
  report.config_hash = fnv1a_hex(canonical);
  report.attacks = cfg.attacks;

  const LabeledDataset base = materialize_dataset(cfg.dataset, cfg.seed);
  const auto [train, test] = split_dataset(base, cfg.split, cfg.seed);

  report.rows.resize(cfg.sigma_list.size());
  parallel_for(cfg.sigma_list.size(), workers, [&](std::size_t s) {
    const double sigma = cfg.sigma_list[s];
    const KernelSpec kernel =
        make_kernel(cfg.family, sigma, static_cast<int>(train.dim()));
    const BaseClassifier clf = build_classifier(cfg.classifier, train, kernel);

    SweepRow row;
    row.sigma = sigma;
    row.train_acc = natural_accuracy(clf, train);
    row.test_acc = natural_accuracy(clf, test);
    row.gap = row.train_acc - row.test_acc;

    for (std::size_t a = 0; a < cfg.attacks.size(); ++a) {
      AttackConfig attack;
      attack.p = cfg.attacks[a].first;
      attack.epsilon = cfg.attacks[a].second;
      attack.n_random = cfg.attack_n_random;
      attack.n_refine = cfg.attack_n_refine;
      rng::Stream mix = rng::derive(cfg.seed, 0x61747463, s * 1024 + a);
      attack.seed = mix.next_u64();
      row.adv_acc.push_back(adversarial_accuracy(clf, test, attack));
    }

    rng::Stream mix_train = rng::derive(cfg.seed, 0x736d7472, s);
    rng::Stream mix_test = rng::derive(cfg.seed, 0x736d7465, s);
    row.smoothed_train_acc =
        smooth_accuracy(clf, kernel, train, cfg.smooth_n, cfg.smooth_alpha,
                        mix_train.next_u64())
            .accuracy;
    const auto smooth_test = smooth_accuracy(clf, kernel, test, cfg.smooth_n,
                                             cfg.smooth_alpha, mix_test.next_u64());
    row.smoothed_test_acc = smooth_test.accuracy;
    row.abstain_rate = smooth_test.abstain_rate;

    if (cfg.census_enabled) {
      std::uint64_t need = 1;
      bool feasible_census = true;
      const std::uint64_t n_labels = train.alphabet().size();
      for (std::size_t i = 0; i < train.size(); ++i) {
        if (need > cfg.census_cap / n_labels) {
          feasible_census = false;
          break;
        }
        need *= n_labels;
      }
      if (feasible_census)
        row.census_size = enumerate_census(train, kernel, cfg.census_cap).realizable_after;
      else
        std::cerr << "warning: census omitted at sigma=" << sigma
                  << " (|Y|^N exceeds cap)\n";
    }
    report.rows[s] = std::move(row);
  });
  return report;
}

std::string sweep_csv_text(const GeneralizationReport& report) {
  std::string out = "config_hash,sigma,train_acc,test_acc,gap";
  for (const auto& [p, eps] : report.attacks)
    out += ",adv_acc_l" + to_string(p) + "_eps" + format_double(eps);
  out += ",smoothed_train_acc,smoothed_test_acc,abstain_rate,census_size\n";
  for (const auto& row : report.rows) {
    out += report.config_hash;
    out += ',';
    out += format_double(row.sigma);
    out += ',';
    out += format_double(row.train_acc);
    out += ',';
    out += format_double(row.test_acc);
    out += ',';
    out += format_double(row.gap);
    for (double a : row.adv_acc) {
      out += ',';
      out += format_double(a);
    }
    out += ',';
    out += format_double(row.smoothed_train_acc);
    out += ',';
    out += format_double(row.smoothed_test_acc);
    out += ',';
    out += format_double(row.abstain_rate);
    out += ',';
    if (row.census_size) out += std::to_string(*row.census_size);
    out += '\n';
  }
  return out;
}

RandomLabelReport run_random_label(const SweepConfig& cfg, int workers) {
  if (cfg.trials < 1) throw ConfigError("trials must be >= 1");
  RandomLabelReport report;
  report.config_hash = fnv1a_hex(sweep_config_canonical_json(cfg));
  report.sigma_list = cfg.sigma_list;

  const LabeledDataset base = materialize_dataset(cfg.dataset, cfg.seed);
  if (base.alphabet().size() < 2)
    throw ConfigError("random-label experiment needs an alphabet of size >= 2");
  const auto [train, test] = split_dataset(base, cfg.split, cfg.seed);

  const std::size_t n_sigma = cfg.sigma_list.size();
  const std::size_t n_rows = static_cast<std::size_t>(cfg.trials) * n_sigma;
  report.rows.resize(n_rows);

  parallel_for(n_rows, workers, [&](std::size_t r) {
    const int trial = static_cast<int>(r / n_sigma);
    const std::size_t s = r % n_sigma;
    const double sigma = cfg.sigma_list[s];

    rng::Stream mix_train = rng::derive(cfg.seed, 0x726c7472, trial);
    rng::Stream mix_test = rng::derive(cfg.seed, 0x726c7465, trial);
    const LabeledDataset train_r = randomize_labels(train, mix_train.next_u64());
    const LabeledDataset test_r = randomize_labels(test, mix_test.next_u64());

    const KernelSpec kernel =
        make_kernel(cfg.family, sigma, static_cast<int>(train.dim()));
    // The memorizing hypothesis is the randomized training labeling itself.
    const int fallback = cfg.classifier.fallback.empty()
                             ? majority_label(train_r)
                             : train_r.label_id(cfg.classifier.fallback);
    const BaseClassifier clf =
        augmented_classifier(train_r, train_r.labels(), kernel, fallback);

    RandomLabelRow row;
    row.trial = trial;
    row.sigma = sigma;
    row.train_acc = natural_accuracy(clf, train_r);
    row.test_acc = natural_accuracy(clf, test_r);
    rng::Stream mix_smtr = rng::derive(cfg.seed, 0x726c7331, r);
    rng::Stream mix_smte = rng::derive(cfg.seed, 0x726c7332, r);
    const auto smooth_train = smooth_accuracy(clf, kernel, train_r, cfg.smooth_n,
                                              cfg.smooth_alpha, mix_smtr.next_u64());
    const auto smooth_test = smooth_accuracy(clf, kernel, test_r, cfg.smooth_n,
                                             cfg.smooth_alpha, mix_smte.next_u64());
    row.smoothed_train_acc = smooth_train.accuracy;
    row.abstain_rate_train = smooth_train.abstain_rate;
    row.smoothed_test_acc = smooth_test.accuracy;
    row.abstain_rate_test = smooth_test.abstain_rate;
    report.rows[r] = row;
  });

  // Per-sigma means and the paired smallest-vs-largest comparison.
  report.mean_train_acc.assign(n_sigma, 0.0);
  report.mean_test_acc.assign(n_sigma, 0.0);
  report.mean_smoothed_train_acc.assign(n_sigma, 0.0);
  report.mean_smoothed_test_acc.assign(n_sigma, 0.0);
  for (const auto& row : report.rows) {
    const std::size_t s =
        std::find(cfg.sigma_list.begin(), cfg.sigma_list.end(), row.sigma) -
        cfg.sigma_list.begin();
    report.mean_train_acc[s] += row.train_acc;
    report.mean_test_acc[s] += row.test_acc;
    report.mean_smoothed_train_acc[s] += row.smoothed_train_acc;
    report.mean_smoothed_test_acc[s] += row.smoothed_test_acc;
  }
  for (std::size_t s = 0; s < n_sigma; ++s) {
    report.mean_train_acc[s] /= cfg.trials;
    report.mean_test_acc[s] /= cfg.trials;
    report.mean_smoothed_train_acc[s] /= cfg.trials;
    report.mean_smoothed_test_acc[s] /= cfg.trials;
  }

  const std::size_t s_small =
      std::min_element(cfg.sigma_list.begin(), cfg.sigma_list.end()) -
      cfg.sigma_list.begin();
  const std::size_t s_large =
      std::max_element(cfg.sigma_list.begin(), cfg.sigma_list.end()) -
      cfg.sigma_list.begin();
  std::vector<double> diffs(cfg.trials, 0.0);
  for (const auto& row : report.rows) {
    const std::size_t s =
        std::find(cfg.sigma_list.begin(), cfg.sigma_list.end(), row.sigma) -
        cfg.sigma_list.begin();
    if (s == s_small) diffs[row.trial] += row.train_acc;
    if (s == s_large) diffs[row.trial] -= row.train_acc;
  }
  report.trials_decreased = 0;
  for (double d : diffs)
    if (d > 0.0) ++report.trials_decreased;
  const double t_count = static_cast<double>(cfg.trials);
  const double mean = std::accumulate(diffs.begin(), diffs.end(), 0.0) / t_count;
  double var = 0.0;
  for (double d : diffs) var += (d - mean) * (d - mean);
  if (cfg.trials > 1) var /= (t_count - 1.0);
  if (var == 0.0) {
    report.paired_t_stat = mean > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
    report.paired_p_value = mean > 0.0 ? 0.0 : 1.0;
  } else {
    report.paired_t_stat = mean / std::sqrt(var / t_count);
    const boost::math::students_t dist(t_count - 1.0);
    report.paired_p_value = boost::math::cdf(boost::math::complement(dist, report.paired_t_stat));
  }
  return report;
}

std::string random_label_csv_text(const RandomLabelReport& report) {
  std::string out =
      "config_hash,trial,sigma,train_acc,test_acc,smoothed_train_acc,smoothed_test_acc,"
      "abstain_rate_train,abstain_rate_test\n";
  for (const auto& row : report.rows) {
    out += report.config_hash;
    out += ',';
    out += std::to_string(row.trial);
    out += ',';
    out += format_double(row.sigma);
    out += ',';
    out += format_double(row.train_acc);
    out += ',';
    out += format_double(row.test_acc);
    out += ',';
    out += format_double(row.smoothed_train_acc);
    out += ',';
    out += format_double(row.smoothed_test_acc);
    out += ',';
    out += format_double(row.abstain_rate_train);
    out += ',';
    out += format_double(row.abstain_rate_test);
    out += '\n';
  }
  return out;
}

std::string random_label_summary_json(const RandomLabelReport& report) {
  nlohmann::json j;
  j["config_hash"] = report.config_hash;
  j["sigma_list"] = report.sigma_list;
  j["mean_train_acc"] = report.mean_train_acc;
  j["mean_test_acc"] = report.mean_test_acc;
  j["mean_smoothed_train_acc"] = report.mean_smoothed_train_acc;
  j["mean_smoothed_test_acc"] = report.mean_smoothed_test_acc;
  j["paired_t_stat"] = report.paired_t_stat;
  j["paired_p_value"] = report.paired_p_value;
  j["trials_decreased"] = report.trials_decreased;
  return j.dump(2);
}

}  // namespace noiselab
