#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "noiselab/dataset.hpp"

using namespace noiselab;

TEST_CASE("demo nine points match the motivating example") {
  const auto ds = demo_nine_points();
  CHECK(ds.size() == 9);
  CHECK(ds.dim() == 2);
  CHECK(ds.alphabet() == std::vector<std::string>{"-1", "+1"});
  int minus = 0;
  for (std::size_t i = 0; i < ds.size(); ++i)
    if (ds.alphabet()[ds.label(i)] == "-1") {
      ++minus;
      CHECK(i == 0);
    }
  CHECK(minus == 1);
  CHECK(ds.point(0)[0] == 0.0);
  CHECK(ds.point(0)[1] == 0.5);
  CHECK(ds.point(8)[0] == 1.0);
  CHECK(ds.point(8)[1] == 0.0);

  // Exhaustive pairwise scan: the closest pair is (0,1/2)-(1/4,1/2).
  CHECK(min_pairwise_distance(ds) == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("constructor rejects invalid datasets") {
  CHECK_THROWS_AS(LabeledDataset({0.0, 0.0}, 1, {0, 0}, {"a"}), std::invalid_argument);
  CHECK_THROWS_AS(LabeledDataset({0.0, 1.0}, 1, {0, 2}, {"a", "b"}), std::invalid_argument);
  CHECK_THROWS_AS(LabeledDataset({0.0, 1.0}, 1, {0, 1}, {"a", "a"}), std::invalid_argument);
  CHECK_THROWS_AS(LabeledDataset({}, 1, {}, {"a"}), std::invalid_argument);
}

TEST_CASE("CSV parsing matches the demo dataset") {
  const std::string text =
      "d=2,labels=-1|+1\n"
      "0,0.5,-1\n"
      "-1,0.5,+1\n"
      "0.25,0.5,+1\n"
      "0.5,2.5,+1\n"
      "-1.3,-1.7,+1\n"
      "0.5,-1,+1\n"
      "0.05,2.5,+1\n"
      "-2,-1.7,+1\n"
      "1,0,+1\n";
  const auto ds = dataset_from_csv_text(text);
  const auto demo = demo_nine_points();
  CHECK(ds.raw_points() == demo.raw_points());
  CHECK(ds.labels() == demo.labels());
  CHECK(ds.alphabet() == demo.alphabet());
}

TEST_CASE("CSV error paths") {
  CHECK_THROWS_AS(dataset_from_csv_text(""), std::invalid_argument);
  CHECK_THROWS_AS(dataset_from_csv_text("d=2,labels=a|b\n0,1\n"), std::invalid_argument);
  CHECK_THROWS_AS(dataset_from_csv_text("d=1,labels=a|b\n0,c\n"), std::invalid_argument);
  // Two identical rows violate almost-sure distinctness.
  CHECK_THROWS_AS(dataset_from_csv_text("d=1,labels=a|b\n0,a\n0,b\n"),
                  std::invalid_argument);
}

TEST_CASE("JSON parsing error paths") {
  CHECK_THROWS_AS(dataset_from_json_text("not json"), std::invalid_argument);
  CHECK_THROWS_AS(dataset_from_json_text(R"({"d":2,"labels":["a"]})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(dataset_from_json_text(R"({"d":2,"labels":["a"],"rows":[[0.0,"a"]]})"),
                  std::invalid_argument);  // ragged row
  CHECK_THROWS_AS(
      dataset_from_json_text(R"({"d":1,"labels":["a"],"rows":[[0.0,"zz"]]})"),
      std::invalid_argument);  // unknown label
}

TEST_CASE("save/load round-trips exactly for both formats") {
  const auto dir = std::filesystem::temp_directory_path() / "noiselab_ds_test";
  std::filesystem::create_directories(dir);
  auto ds = synth_clusters(3, 7, 2, 0.731, 5.0, 99);
  for (auto format : {DatasetFormat::csv, DatasetFormat::json}) {
    const auto path = dir / (format == DatasetFormat::csv ? "ds.csv" : "ds.json");
    save_dataset(ds, path, format);
    const auto back = load_dataset(path, format);
    CHECK(back.raw_points() == ds.raw_points());
    CHECK(back.labels() == ds.labels());
    CHECK(back.alphabet() == ds.alphabet());
  }
}

TEST_CASE("synth clusters") {
  SUBCASE("determinism and labels") {
    const auto a = synth_clusters(2, 30, 2, 1.0, 10.0, 7);
    const auto b = synth_clusters(2, 30, 2, 1.0, 10.0, 7);
    CHECK(a.raw_points() == b.raw_points());
    CHECK(a.labels() == b.labels());
    CHECK(a.size() == 60);
  }

  SUBCASE("1-NN consistency with well separated clusters") {
    const auto ds = synth_clusters(2, 30, 2, 1.0, 10.0, 7);
    // Every point's nearest neighbor shares its cluster label.
    for (std::size_t i = 0; i < ds.size(); ++i) {
      double best = 1e300;
      std::size_t arg = i;
      for (std::size_t j = 0; j < ds.size(); ++j) {
        if (j == i) continue;
        double s = 0.0;
        for (std::size_t a = 0; a < 2; ++a) {
          const double d = ds.point(i)[a] - ds.point(j)[a];
          s += d * d;
        }
        if (s < best) {
          best = s;
          arg = j;
        }
      }
      CHECK(ds.label(arg) == ds.label(i));
    }
  }

  SUBCASE("single cluster labels are constant") {
    const auto ds = synth_clusters(1, 5, 3, 0.5, 1.0, 3);
    for (std::size_t i = 0; i < ds.size(); ++i) CHECK(ds.label(i) == 0);
  }
}

TEST_CASE("randomize_labels") {
  const auto base = synth_clusters(10, 1000, 2, 0.25, 10.0, 5);
  const auto r1 = randomize_labels(base, 77);
  const auto r2 = randomize_labels(base, 77);
  CHECK(r1.labels() == r2.labels());
  CHECK(r1.raw_points() == base.raw_points());
  CHECK(r1.alphabet() == base.alphabet());

  // 10^4 points over 10 labels: each frequency within a 5-sigma binomial band.
  std::vector<int> counts(10, 0);
  for (std::size_t i = 0; i < r1.size(); ++i) ++counts[r1.label(i)];
  const double n = static_cast<double>(r1.size());
  const double sd = std::sqrt(n * 0.1 * 0.9);
  for (int c : counts) CHECK(std::abs(c - n * 0.1) <= 5.0 * sd);

  const auto binary = synth_clusters(1, 4, 1, 1.0, 1.0, 3);
  CHECK_THROWS_AS(randomize_labels(binary, 1), std::invalid_argument);
}

TEST_CASE("pairwise distance helpers") {
  const LabeledDataset two({0.0, 1.0}, 1, {0, 1}, {"a", "b"});
  CHECK(min_pairwise_distance(two) == 1.0);
  CHECK_THROWS_AS(second_neighbor_distances(two), std::invalid_argument);

  const LabeledDataset line({0.0, 1.0, 2.0}, 1, {0, 1, 0}, {"a", "b"});
  const auto second = second_neighbor_distances(line);
  CHECK(second == std::vector<double>{2.0, 1.0, 2.0});

  const LabeledDataset single({0.0}, 1, {0}, {"a"});
  CHECK_THROWS_AS(min_pairwise_distance(single), std::invalid_argument);
}
