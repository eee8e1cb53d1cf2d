#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "noiselab/augment.hpp"
#include "noiselab/census.hpp"
#include "noiselab/dataset.hpp"
#include "noiselab/harness.hpp"
#include "noiselab/kernels.hpp"
#include "noiselab/render.hpp"
#include "noiselab/robustness.hpp"
#include "noiselab/smoothing.hpp"
#include "noiselab/threshold.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace noiselab;

namespace {

struct GlobalOpts {
  std::uint64_t seed = 1;
  int workers = 1;
  std::string out_dir = "out";
};

void write_text(const fs::path& path, const std::string& text) {
  fs::create_directories(path.parent_path().empty() ? "." : path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

DatasetFormat format_from_path(const std::string& format, const std::string& path) {
  if (format == "csv") return DatasetFormat::csv;
  if (format == "json") return DatasetFormat::json;
  if (format == "auto")
    return fs::path(path).extension() == ".json" ? DatasetFormat::json : DatasetFormat::csv;
  throw ConfigError("dataset format must be csv, json, or auto");
}

LabeledDataset load_cli_dataset(const std::string& path, const std::string& format) {
  if (path == "demo") return demo_nine_points();
  try {
    return load_dataset(path, format_from_path(format, path));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

// Kernel JSON with the dataset supplying a default dimension and scale
// defaulting to 1 (threshold-style uses ignore it anyway).
KernelSpec parse_kernel(const std::string& text, std::optional<std::size_t> dataset_dim,
                        std::optional<double> sigma_override = std::nullopt) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad kernel JSON: ") + e.what());
  }
  if (!j.contains("family")) throw ConfigError("kernel JSON needs a family");
  KernelSpec k;
  try {
    k.family = kernel_family_from_string(j["family"].get<std::string>());
    k.scale = j.value("scale", 1.0);
    if (j.contains("dim"))
      k.dim = j["dim"].get<int>();
    else if (dataset_dim)
      k.dim = static_cast<int>(*dataset_dim);
    else
      throw ConfigError("kernel JSON needs a dim");
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad kernel JSON value: ") + e.what());
  }
  if (sigma_override) k.scale = *sigma_override;
  try {
    validate_spec(k);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return k;
}

// Classifier spec JSON: {"type": "nn"} |
// {"type": "halfspace", "w": [...], "b": 0.0} |
// {"type": "augmented", "kernel": {...}, "fallback": "+1"}.
BaseClassifier parse_classifier(const std::string& text, const LabeledDataset& ds,
                                std::optional<KernelSpec> default_kernel) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad classifier JSON: ") + e.what());
  }
  ClassifierSpec spec;
  try {
    spec.type = j.value("type", std::string("augmented"));
    spec.fallback = j.value("fallback", std::string());
    if (j.contains("w")) spec.halfspace_w = j["w"].get<std::vector<double>>();
    spec.halfspace_b = j.value("b", 0.0);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad classifier value: ") + e.what());
  }
  KernelSpec kernel = default_kernel.value_or(
      KernelSpec{KernelFamily::gaussian, 1.0, static_cast<int>(ds.dim())});
  if (j.contains("kernel")) kernel = parse_kernel(j["kernel"].dump(), ds.dim());
  try {
    return build_classifier(spec, ds, kernel);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

json validation_to_json(const ValidationReport& r) {
  auto check = [](const CheckResult& c) {
    return json{{"ok", c.ok}, {"residual", c.residual}};
  };
  json j;
  j["unit_mass"] = check(r.unit_mass);
  j["symmetry"] = check(r.symmetry);
  j["mode_at_origin"] = check(r.mode_at_origin);
  if (r.separability_checked) j["separability"] = check(r.separability);
  j["monotone_decay"] = check(r.monotone_decay);
  if (r.log_concavity_checked) j["log_concavity"] = check(r.log_concavity);
  j["all_ok"] = r.all_ok();
  return j;
}

json census_to_json(const CensusReport& r) {
  json j;
  j["total"] = r.total;
  j["realizable_after"] = r.realizable_after;
  j["image_size"] = r.image_size;
  j["equality"] = r.equality;
  j["tie_count"] = r.tie_count;
  j["lost_indices"] = r.lost_indices;
  json lost = json::array();
  for (const auto& h : r.lost_examples) lost.push_back(h);
  j["lost_examples"] = std::move(lost);
  return j;
}

int cmd_kernel_check(const GlobalOpts& g, const std::string& kernel_json,
                     std::int64_t cells, double extent, double tolerance) {
  const KernelSpec k = parse_kernel(kernel_json, std::nullopt);
  QuadratureConfig grid;
  grid.cells_per_axis = cells;
  grid.extent_sigmas = extent;
  grid.tolerance = tolerance;
  const auto report = validate(k, grid);
  json j = validation_to_json(report);
  json cfg{{"kernel", json::parse(kernel_to_json(k))},
           {"cells", cells},
           {"extent_sigmas", extent},
           {"tolerance", tolerance}};
  j["config_hash"] = fnv1a_hex(cfg.dump());
  const std::string text = j.dump(2) + "\n";
  write_text(fs::path(g.out_dir) / "kernel_check.json", text);
  std::cout << text;
  return report.all_ok() ? 0 : 3;
}

int cmd_threshold(const GlobalOpts& g, const std::string& dataset_path,
                  const std::string& format, const std::string& kernel_json,
                  double rel_tol) {
  const LabeledDataset ds = load_cli_dataset(dataset_path, format);
  const KernelSpec k = parse_kernel(kernel_json, ds.dim());
  ThresholdResult result;
  try {
    result = solve_threshold(ds, k.family, rel_tol);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  json cfg{{"dataset", dataset_path},
           {"family", to_string(k.family)},
           {"rel_tol", rel_tol},
           {"seed", g.seed}};
  const std::string hash = fnv1a_hex(cfg.dump());
  json j{{"theta_weak", result.theta_weak},
         {"theta_strict", result.theta_strict},
         {"binding_index", result.binding_index},
         {"config_hash", hash}};
  std::string csv = "config_hash,sigma,min_slack\n";
  for (const auto& [sigma, slack] : result.residual_curve)
    csv += hash + "," + format_double(sigma) + "," + format_double(slack) + "\n";
  write_text(fs::path(g.out_dir) / "threshold.json", j.dump(2) + "\n");
  write_text(fs::path(g.out_dir) / "threshold_residuals.csv", csv);
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_census(const GlobalOpts& g, const std::string& dataset_path,
               const std::string& format, const std::string& kernel_json, double sigma,
               bool auto_bracket, std::uint64_t cap, double rel_tol) {
  const LabeledDataset ds = load_cli_dataset(dataset_path, format);
  json out;
  json cfg{{"dataset", dataset_path},
           {"kernel", kernel_json},
           {"sigma", sigma},
           {"auto_bracket", auto_bracket},
           {"cap", cap},
           {"seed", g.seed}};
  out["config_hash"] = fnv1a_hex(cfg.dump());
  try {
    if (auto_bracket) {
      const KernelSpec base = parse_kernel(kernel_json, ds.dim());
      const auto threshold = solve_threshold(ds, base.family, rel_tol);
      out["threshold"] = {{"theta_weak", threshold.theta_weak},
                          {"theta_strict", threshold.theta_strict},
                          {"binding_index", threshold.binding_index}};
      KernelSpec below = base, above = base;
      below.scale = 0.9 * threshold.theta_strict;
      above.scale = 1.1 * threshold.theta_weak;
      out["below"] = census_to_json(enumerate_census(ds, below, cap, g.workers));
      out["below"]["sigma"] = below.scale;
      out["above"] = census_to_json(enumerate_census(ds, above, cap, g.workers));
      out["above"]["sigma"] = above.scale;
    } else {
      if (!(sigma > 0.0)) throw ConfigError("census needs --sigma > 0 or --auto-bracket");
      const KernelSpec k = parse_kernel(kernel_json, ds.dim(), sigma);
      out["census"] = census_to_json(enumerate_census(ds, k, cap, g.workers));
      out["census"]["sigma"] = sigma;
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  const std::string text = out.dump(2) + "\n";
  write_text(fs::path(g.out_dir) / "census.json", text);
  std::cout << text;
  return 0;
}

int cmd_smooth(const GlobalOpts& g, const std::string& dataset_path,
               const std::string& format, const std::string& kernel_json,
               const std::string& clf_json, std::int64_t n, double alpha) {
  const LabeledDataset ds = load_cli_dataset(dataset_path, format);
  const KernelSpec k = parse_kernel(kernel_json, ds.dim());
  const BaseClassifier clf = parse_classifier(clf_json, ds, k);
  if (!(n >= 1)) throw ConfigError("--n must be >= 1");
  if (!(alpha > 0.0 && alpha < 0.5)) throw ConfigError("--alpha must lie in (0, 0.5)");

  json cfg{{"dataset", dataset_path}, {"kernel", kernel_to_json(k)},
           {"clf", clf_json},         {"n", n},
           {"alpha", alpha},          {"seed", g.seed}};
  const std::string hash = fnv1a_hex(cfg.dump());

  std::string csv = "config_hash,index,true_label,decision,votes,abstain\n";
  std::size_t correct = 0, abstained = 0;
  std::vector<SmoothedPrediction> preds(ds.size());
  for (std::size_t i = 0; i < ds.size(); ++i) {
    rng::Stream stream = rng::derive(g.seed, i);
    preds[i] = smooth_predict(clf, k, ds.point(i), n, alpha, stream);
  }
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const auto& p = preds[i];
    if (p.abstain)
      ++abstained;
    else if (p.label == ds.label(i))
      ++correct;
    std::string votes;
    for (std::size_t v = 0; v < p.votes.size(); ++v) {
      if (v) votes += '|';
      votes += std::to_string(p.votes[v]);
    }
    csv += hash + "," + std::to_string(i) + "," + ds.alphabet()[ds.label(i)] + "," +
           (p.abstain ? "ABSTAIN" : ds.alphabet()[p.label]) + "," + votes + "," +
           (p.abstain ? "1" : "0") + "\n";
  }
  json summary{{"config_hash", hash},
               {"accuracy", static_cast<double>(correct) / ds.size()},
               {"abstain_rate", static_cast<double>(abstained) / ds.size()}};
  write_text(fs::path(g.out_dir) / "smooth.csv", csv);
  write_text(fs::path(g.out_dir) / "smooth_summary.json", summary.dump(2) + "\n");
  std::cout << summary.dump(2) << "\n";
  return 0;
}

int cmd_attack(const GlobalOpts& g, const std::string& dataset_path,
               const std::string& format, const std::string& clf_json,
               const std::string& p_name, double eps, int n_random, int n_refine) {
  const LabeledDataset ds = load_cli_dataset(dataset_path, format);
  const BaseClassifier clf = parse_classifier(clf_json, ds, std::nullopt);
  AttackConfig cfg;
  try {
    cfg.p = norm_from_string(p_name);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (eps < 0.0) throw ConfigError("--eps must be >= 0");
  cfg.epsilon = eps;
  cfg.n_random = n_random;
  cfg.n_refine = n_refine;

  json cj{{"dataset", dataset_path}, {"clf", clf_json},       {"p", p_name},
          {"eps", eps},              {"n_random", n_random},  {"n_refine", n_refine},
          {"seed", g.seed}};
  const std::string hash = fnv1a_hex(cj.dump());

  std::string csv = "config_hash,index,true_label,predicted,attack_success,adv_point\n";
  std::size_t natural = 0, surviving = 0;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const int predicted = clf.classify(ds.point(i));
    const bool nat_correct = predicted == ds.label(i);
    if (nat_correct) ++natural;
    AttackConfig local = cfg;
    rng::Stream mix = rng::derive(g.seed, 0x61647661, i);
    local.seed = mix.next_u64();
    const auto outcome = attack_point(clf, ds.point(i), ds.label(i), local);
    if (nat_correct && !outcome.success) ++surviving;
    std::string point;
    for (std::size_t a = 0; a < outcome.adversarial_point.size(); ++a) {
      if (a) point += '|';
      point += format_double(outcome.adversarial_point[a]);
    }
    csv += hash + "," + std::to_string(i) + "," + ds.alphabet()[ds.label(i)] + "," +
           ds.alphabet()[predicted] + "," + (outcome.success ? "1" : "0") + "," + point +
           "\n";
  }
  json summary{{"config_hash", hash},
               {"natural_accuracy", static_cast<double>(natural) / ds.size()},
               {"adversarial_accuracy", static_cast<double>(surviving) / ds.size()}};
  write_text(fs::path(g.out_dir) / "attack.csv", csv);
  write_text(fs::path(g.out_dir) / "attack_summary.json", summary.dump(2) + "\n");
  std::cout << summary.dump(2) << "\n";
  return 0;
}

int cmd_render(const GlobalOpts& g, const std::string& dataset_path,
               const std::string& format, const std::string& kernel_json,
               const std::string& labeling_arg, const std::string& res,
               const std::string& out_name) {
  const LabeledDataset ds = load_cli_dataset(dataset_path, format);
  if (ds.dim() != 2) throw ConfigError("render requires a 2-D dataset");
  const KernelSpec k = parse_kernel(kernel_json, ds.dim());

  Labeling h;
  if (labeling_arg == "dataset") {
    h = ds.labels();
  } else {
    std::istringstream in(read_text(labeling_arg));
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      h.push_back(ds.label_id(line));
    }
    if (h.size() != ds.size())
      throw ConfigError("labeling file must contain one label per sample");
  }

  const auto sep = res.find('x');
  if (sep == std::string::npos) throw ConfigError("--res must look like WxH");
  const int width = std::stoi(res.substr(0, sep));
  const int height = std::stoi(res.substr(sep + 1));
  if (width < 2 || height < 2) throw ConfigError("resolution must be at least 2x2");

  const BBox box = default_bbox(ds, k.scale);
  const RegionGrid grid = rasterize(ds, h, k, box, width, height, g.workers);
  const fs::path ppm_path = fs::path(g.out_dir) / out_name;
  fs::create_directories(ppm_path.parent_path().empty() ? "." : ppm_path.parent_path());
  write_ppm(grid, ds.alphabet(), ppm_path);
  write_region_csv(grid, ds.alphabet(),
                   fs::path(ppm_path).replace_extension(".csv"));
  json summary{{"width", width},
               {"height", height},
               {"bbox", {box.x_min, box.x_max, box.y_min, box.y_max}},
               {"out", ppm_path.string()}};
  std::cout << summary.dump(2) << "\n";
  return 0;
}

int cmd_sweep(const GlobalOpts& g, const std::string& config_path, bool seed_set) {
  SweepConfig cfg = sweep_config_from_json_text(read_text(config_path));
  if (seed_set) cfg.seed = g.seed;
  if (!g.out_dir.empty()) cfg.out_dir = g.out_dir;
  const auto report = run_sweep(cfg, g.workers);
  write_text(fs::path(cfg.out_dir) / "sweep.csv", sweep_csv_text(report));
  json j{{"config_hash", report.config_hash},
         {"rows", report.rows.size()},
         {"out", (fs::path(cfg.out_dir) / "sweep.csv").string()}};
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_random_label(const GlobalOpts& g, const std::string& config_path, bool seed_set) {
  SweepConfig cfg = sweep_config_from_json_text(read_text(config_path));
  if (seed_set) cfg.seed = g.seed;
  if (!g.out_dir.empty()) cfg.out_dir = g.out_dir;
  const auto report = run_random_label(cfg, g.workers);
  write_text(fs::path(cfg.out_dir) / "random_label.csv", random_label_csv_text(report));
  write_text(fs::path(cfg.out_dir) / "random_label_summary.json",
             random_label_summary_json(report) + "\n");
  std::cout << random_label_summary_json(report) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"noise-augmented classification and randomized smoothing toolkit"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand

  GlobalOpts global;
  bool seed_set = false;
  app.add_option("--seed", global.seed, "master seed")->each([&](const std::string&) {
    seed_set = true;
  });
  app.add_option("--workers", global.workers, "worker thread count")
      ->check(CLI::PositiveNumber);
  app.add_option("--out-dir", global.out_dir, "artifact directory");

  // kernel-check
  auto* kc = app.add_subcommand("kernel-check", "validate kernel properties");
  std::string kc_kernel;
  std::int64_t kc_cells = 512;
  double kc_extent = 8.0, kc_tol = 1e-6;
  kc->add_option("--kernel", kc_kernel, "kernel JSON")->required();
  kc->add_option("--cells", kc_cells, "quadrature cells per axis");
  kc->add_option("--extent-sigmas", kc_extent, "grid half-width in sigmas");
  kc->add_option("--tolerance", kc_tol, "flag tolerance");

  // threshold
  auto* th = app.add_subcommand("threshold", "solve the critical noise level");
  std::string th_dataset, th_format = "auto", th_kernel;
  double th_rel_tol = 1e-9;
  th->add_option("--dataset", th_dataset, "dataset path or 'demo'")->required();
  th->add_option("--dataset-format", th_format, "csv|json|auto");
  th->add_option("--kernel", th_kernel, "kernel JSON (scale ignored)")->required();
  th->add_option("--rel-tol", th_rel_tol, "relative bisection tolerance");

  // census
  auto* ce = app.add_subcommand("census", "enumerate the hypothesis census");
  std::string ce_dataset, ce_format = "auto", ce_kernel;
  double ce_sigma = 0.0, ce_rel_tol = 1e-9;
  bool ce_auto = false;
  std::uint64_t ce_cap = std::uint64_t{1} << 24;
  ce->add_option("--dataset", ce_dataset, "dataset path or 'demo'")->required();
  ce->add_option("--dataset-format", ce_format, "csv|json|auto");
  ce->add_option("--kernel", ce_kernel, "kernel JSON")->required();
  ce->add_option("--sigma", ce_sigma, "noise level");
  ce->add_flag("--auto-bracket", ce_auto, "census at 0.9*theta_strict and 1.1*theta_weak");
  ce->add_option("--cap", ce_cap, "labeling count cap");
  ce->add_option("--rel-tol", ce_rel_tol, "threshold tolerance for --auto-bracket");

  // smooth
  auto* sm = app.add_subcommand("smooth", "Monte-Carlo randomized smoothing");
  std::string sm_dataset, sm_format = "auto", sm_kernel, sm_clf = "{\"type\":\"nn\"}";
  std::int64_t sm_n = 10000;
  double sm_alpha = 0.001;
  sm->add_option("--dataset", sm_dataset, "dataset path or 'demo'")->required();
  sm->add_option("--dataset-format", sm_format, "csv|json|auto");
  sm->add_option("--kernel", sm_kernel, "kernel JSON")->required();
  sm->add_option("--clf", sm_clf, "classifier JSON");
  sm->add_option("--n", sm_n, "samples per prediction");
  sm->add_option("--alpha", sm_alpha, "failure probability");

  // attack
  auto* at = app.add_subcommand("attack", "derivative-free adversarial evaluation");
  std::string at_dataset, at_format = "auto", at_clf = "{\"type\":\"nn\"}", at_p = "2";
  double at_eps = 0.0;
  int at_n_random = 64, at_n_refine = 20;
  at->add_option("--dataset", at_dataset, "dataset path or 'demo'")->required();
  at->add_option("--dataset-format", at_format, "csv|json|auto");
  at->add_option("--clf", at_clf, "classifier JSON");
  at->add_option("--p", at_p, "norm order: 1|2|inf");
  at->add_option("--eps", at_eps, "perturbation budget")->required();
  at->add_option("--n-random", at_n_random, "random directions");
  at->add_option("--n-refine", at_n_refine, "refinement passes");

  // render
  auto* re = app.add_subcommand("render", "rasterize augmented decision regions");
  std::string re_dataset, re_format = "auto", re_kernel, re_labeling = "dataset";
  std::string re_res = "256x256", re_out = "regions.ppm";
  re->add_option("--dataset", re_dataset, "dataset path or 'demo'")->required();
  re->add_option("--dataset-format", re_format, "csv|json|auto");
  re->add_option("--kernel", re_kernel, "kernel JSON")->required();
  re->add_option("--labeling", re_labeling, "'dataset' or a label-per-line file");
  re->add_option("--res", re_res, "grid resolution WxH");
  re->add_option("--out", re_out, "output PPM name");

  // sweep
  auto* sw = app.add_subcommand("sweep", "config-driven sigma sweep");
  std::string sw_config;
  sw->add_option("--config", sw_config, "sweep config JSON file")->required();

  // random-label
  auto* rl = app.add_subcommand("random-label", "random relabeling experiment");
  std::string rl_config;
  rl->add_option("--config", rl_config, "config JSON file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return 2;
  }

  try {
    if (kc->parsed())
      return cmd_kernel_check(global, kc_kernel, kc_cells, kc_extent, kc_tol);
    if (th->parsed())
      return cmd_threshold(global, th_dataset, th_format, th_kernel, th_rel_tol);
    if (ce->parsed())
      return cmd_census(global, ce_dataset, ce_format, ce_kernel, ce_sigma, ce_auto, ce_cap,
                        ce_rel_tol);
    if (sm->parsed())
      return cmd_smooth(global, sm_dataset, sm_format, sm_kernel, sm_clf, sm_n, sm_alpha);
    if (at->parsed())
      return cmd_attack(global, at_dataset, at_format, at_clf, at_p, at_eps, at_n_random,
                        at_n_refine);
    if (re->parsed())
      return cmd_render(global, re_dataset, re_format, re_kernel, re_labeling, re_res,
                        re_out);
    if (sw->parsed()) return cmd_sweep(global, sw_config, seed_set);
    if (rl->parsed()) return cmd_random_label(global, rl_config, seed_set);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const MonotonicityViolation& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    // Bad arguments surfacing from the library trace back to user inputs.
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
