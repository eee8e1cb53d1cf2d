#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "noiselab/augment.hpp"
#include "noiselab/rng.hpp"
#include "noiselab/threshold.hpp"

using namespace noiselab;

namespace {

LabeledDataset random_binary_dataset(std::size_t n, int dim, std::uint64_t seed) {
  rng::Stream s = rng::derive(seed, 0xd5);
  std::vector<double> points(n * dim);
  std::vector<int> labels(n);
  for (std::size_t i = 0; i < n * static_cast<std::size_t>(dim); ++i)
    points[i] = 4.0 * (s.uniform01() - 0.5);
  for (std::size_t i = 0; i < n; ++i) labels[i] = static_cast<int>(s.below(2));
  return LabeledDataset(std::move(points), dim, std::move(labels), {"-1", "+1"});
}

}  // namespace

TEST_CASE("class_scores: uniform kernel below min pairwise distance isolates points") {
  const auto ds = demo_nine_points();
  const double sigma = 0.2;  // below the 0.25 minimum gap
  const KernelSpec k = make_kernel(KernelFamily::uniform_ball, sigma, 2);
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const auto scores = class_scores(ds, ds.labels(), k, ds.point(i));
    for (std::size_t y = 0; y < scores.size(); ++y) {
      if (static_cast<int>(y) == ds.label(i))
        CHECK(scores[y] == 1.0 / (sigma * sigma * std::numbers::pi));
      else
        CHECK(scores[y] == 0.0);
    }
  }
}

TEST_CASE("class_scores: single point and symmetric midpoint") {
  const LabeledDataset single({0.5, 0.5}, 2, {0}, {"a", "b"});
  const KernelSpec k = make_kernel(KernelFamily::gaussian, 1.0, 2);
  const std::vector<double> q{1.0, 0.0};
  const auto scores = class_scores(single, single.labels(), k, q);
  CHECK(scores[0] > 0.0);
  CHECK(scores[1] == 0.0);

  const LabeledDataset pair({0.0, 0.0, 1.0, 0.0}, 2, {0, 0}, {"a", "b"});
  const std::vector<double> mid{0.5, 0.0};
  const auto s2 = class_scores(pair, pair.labels(), k, mid);
  const std::vector<double> halfgap{0.5, 0.0};
  CHECK(s2[0] == doctest::Approx(2.0 * density(k, halfgap)).epsilon(1e-15));
}

TEST_CASE("augmented_classify on the demo dataset across the three regimes") {
  const auto ds = demo_nine_points();
  const Labeling truth = ds.labels();

  SUBCASE("sigma = 1/8: every training point keeps its own label") {
    const KernelSpec k = make_kernel(KernelFamily::uniform_ball, 0.125, 2);
    const auto restriction = augmented_restriction(ds, truth, k);
    for (std::size_t i = 0; i < ds.size(); ++i)
      CHECK(restriction[i] == AugmentedDecision::make_label(truth[i]));
  }

  SUBCASE("sigma = 1/2: the -1 point ties with its lone +1 influencer") {
    // Exactly one +1 point, (1/4, 1/2), lies strictly within 1/2 of (0, 1/2),
    // and the uniform kernel gives it the same mass as the self term, so the
    // argmax is undefined there (the gray region of the middle regime).
    const KernelSpec k = make_kernel(KernelFamily::uniform_ball, 0.5, 2);
    const auto decision = augmented_classify(ds, truth, k, ds.point(0));
    CHECK(decision == AugmentedDecision::tie());
  }

  SUBCASE("sigma = 2: the lone -1 point is outvoted to +1") {
    const KernelSpec k = make_kernel(KernelFamily::uniform_ball, 2.0, 2);
    const auto decision = augmented_classify(ds, truth, k, ds.point(0));
    CHECK(decision == AugmentedDecision::make_label(ds.label_id("+1")));
  }
}

TEST_CASE("tie and no-influence cases") {
  const LabeledDataset pair({0.0, 0.0, 1.0, 0.0}, 2, {0, 1}, {"-1", "+1"});

  SUBCASE("equidistant opposite labels tie under any symmetric kernel") {
    const std::vector<double> mid{0.5, 0.0};
    for (auto family :
         {KernelFamily::gaussian, KernelFamily::laplace, KernelFamily::uniform_ball}) {
      const KernelSpec k = make_kernel(family, 1.5, 2);
      CHECK(augmented_classify(pair, pair.labels(), k, mid) == AugmentedDecision::tie());
    }
  }

  SUBCASE("uniform kernel outside all supports yields no influence") {
    const KernelSpec k = make_kernel(KernelFamily::uniform_ball, 0.5, 2);
    const std::vector<double> far{10.0, 10.0};
    CHECK(augmented_classify(pair, pair.labels(), k, far) ==
          AugmentedDecision::none());
  }
}

TEST_CASE("augmented_restriction: all-same-label dataset is fixed at any sigma") {
  const LabeledDataset ds({0.0, 1.0, 2.5, 4.0}, 1, {1, 1, 1, 1}, {"-1", "+1"});
  for (double sigma : {0.1, 1.0, 50.0}) {
    const KernelSpec k = make_kernel(KernelFamily::gaussian, sigma, 1);
    for (const auto& d : augmented_restriction(ds, ds.labels(), k))
      CHECK(d == AugmentedDecision::make_label(1));
  }
}

TEST_CASE("influences") {
  const std::vector<double> a{0.0, 0.0};
  const std::vector<double> b{0.5, 0.0};
  const std::vector<double> c{2.0, 0.0};
  const KernelSpec g = make_kernel(KernelFamily::gaussian, 1.0, 2);
  const KernelSpec u = make_kernel(KernelFamily::uniform_ball, 1.0, 2);
  CHECK(influences(g, a, c));
  CHECK(influences(u, a, b));
  CHECK_FALSE(influences(u, a, c));
}

TEST_CASE("label-permutation equivariance") {
  const auto ds = random_binary_dataset(7, 2, 31);
  const KernelSpec k = make_kernel(KernelFamily::laplace, 0.8, 2);
  rng::Stream s = rng::derive(32, 0);
  for (int t = 0; t < 25; ++t) {
    Labeling h(ds.size());
    for (auto& v : h) v = static_cast<int>(s.below(2));
    Labeling swapped(h);
    for (auto& v : swapped) v = 1 - v;
    std::vector<double> q{4.0 * (s.uniform01() - 0.5), 4.0 * (s.uniform01() - 0.5)};
    const auto d1 = augmented_classify(ds, h, k, q);
    const auto d2 = augmented_classify(ds, swapped, k, q);
    CHECK(d1.kind == d2.kind);
    if (d1.kind == DecisionKind::label) CHECK(d2.label == 1 - d1.label);
  }
}

TEST_CASE("point-permutation invariance") {
  const auto ds = random_binary_dataset(8, 2, 41);
  // Reverse the row order with labels attached.
  std::vector<double> rev_points;
  std::vector<int> rev_labels;
  for (std::size_t i = ds.size(); i-- > 0;) {
    rev_points.insert(rev_points.end(), ds.point(i).begin(), ds.point(i).end());
    rev_labels.push_back(ds.label(i));
  }
  const LabeledDataset rev(std::move(rev_points), 2, std::move(rev_labels), ds.alphabet());

  const KernelSpec k = make_kernel(KernelFamily::gaussian, 0.9, 2);
  rng::Stream s = rng::derive(42, 0);
  for (int t = 0; t < 50; ++t) {
    std::vector<double> q{4.0 * (s.uniform01() - 0.5), 4.0 * (s.uniform01() - 0.5)};
    CHECK(augmented_classify(ds, ds.labels(), k, q) ==
          augmented_classify(rev, rev.labels(), k, q));
  }
}

TEST_CASE("scale covariance of decisions") {
  const auto ds = random_binary_dataset(6, 2, 51);
  rng::Stream s = rng::derive(52, 0);
  for (auto family :
       {KernelFamily::gaussian, KernelFamily::laplace, KernelFamily::uniform_ball}) {
    for (int t = 0; t < 20; ++t) {
      const double c = 0.2 + 5.0 * s.uniform01();
      const double sigma = 0.4 + s.uniform01();
      std::vector<double> q{4.0 * (s.uniform01() - 0.5), 4.0 * (s.uniform01() - 0.5)};

      std::vector<double> scaled_points(ds.raw_points());
      for (double& v : scaled_points) v *= c;
      const LabeledDataset scaled(std::move(scaled_points), 2,
                                  std::vector<int>(ds.labels()), ds.alphabet());
      std::vector<double> cq{c * q[0], c * q[1]};

      const KernelSpec k = make_kernel(family, sigma, 2);
      const KernelSpec ck = make_kernel(family, c * sigma, 2);
      CHECK(augmented_classify(ds, ds.labels(), k, q) ==
            augmented_classify(scaled, scaled.labels(), ck, cq));
    }
  }
}

TEST_CASE("below theta_strict every labeling is a fixed point (exhaustive)") {
  const auto ds = random_binary_dataset(6, 2, 61);
  for (auto family :
       {KernelFamily::gaussian, KernelFamily::laplace, KernelFamily::uniform_ball}) {
    const auto threshold = solve_threshold(ds, family, 1e-9);
    const KernelSpec k = make_kernel(family, 0.98 * threshold.theta_strict, 2);
    for (std::uint64_t code = 0; code < 64; ++code) {
      Labeling h(6);
      for (int i = 0; i < 6; ++i) h[i] = static_cast<int>((code >> i) & 1);
      const auto restriction = augmented_restriction(ds, h, k);
      for (std::size_t i = 0; i < 6; ++i)
        CHECK(restriction[i] == AugmentedDecision::make_label(h[i]));
    }
  }
}

TEST_CASE("labeling validation") {
  const auto ds = demo_nine_points();
  const KernelSpec k = make_kernel(KernelFamily::gaussian, 1.0, 2);
  Labeling wrong_len(8, 0);
  CHECK_THROWS_AS(augmented_restriction(ds, wrong_len, k), std::invalid_argument);
  Labeling bad_value(9, 5);
  CHECK_THROWS_AS(augmented_restriction(ds, bad_value, k), std::invalid_argument);
  const KernelSpec bad_dim = make_kernel(KernelFamily::gaussian, 1.0, 3);
  CHECK_THROWS_AS(augmented_restriction(ds, ds.labels(), bad_dim), std::invalid_argument);
}

TEST_CASE("decision string round trip") {
  const std::vector<std::string> alphabet{"-1", "+1"};
  CHECK(to_string(AugmentedDecision::tie(), alphabet) == "TIE");
  CHECK(to_string(AugmentedDecision::none(), alphabet) == "NONE");
  CHECK(to_string(AugmentedDecision::make_label(1), alphabet) == "+1");
  CHECK(decision_from_string("TIE", alphabet) == AugmentedDecision::tie());
  CHECK(decision_from_string("-1", alphabet) == AugmentedDecision::make_label(0));
  CHECK_THROWS_AS(decision_from_string("bogus", alphabet), std::invalid_argument);
}
