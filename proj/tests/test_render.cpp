#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "noiselab/render.hpp"

using namespace noiselab;

namespace {

bool cell_contains(const RegionGrid& grid, int i, int j, double x, double y) {
  const double hx = (grid.bbox.x_max - grid.bbox.x_min) / grid.width;
  const double hy = (grid.bbox.y_max - grid.bbox.y_min) / grid.height;
  return std::abs(grid.center_x(i) - x) <= hx / 2.0 &&
         std::abs(grid.center_y(j) - y) <= hy / 2.0;
}

std::pair<int, int> locate(const RegionGrid& grid, double x, double y) {
  for (int j = 0; j < grid.height; ++j)
    for (int i = 0; i < grid.width; ++i)
      if (cell_contains(grid, i, j, x, y)) return {i, j};
  throw std::runtime_error("point not covered by grid");
}

}  // namespace

TEST_CASE("rasterize validates inputs") {
  const auto ds = demo_nine_points();
  const KernelSpec k = make_kernel(KernelFamily::uniform_ball, 0.125, 2);
  const BBox box{-3.0, 3.0, -3.0, 3.0};
  CHECK_THROWS_AS(rasterize(ds, ds.labels(), k, box, 1, 8), std::invalid_argument);
  const LabeledDataset line({0.0, 1.0, 2.0}, 1, {0, 1, 0}, {"-1", "+1"});
  const KernelSpec k1 = make_kernel(KernelFamily::gaussian, 1.0, 1);
  CHECK_THROWS_AS(rasterize(line, line.labels(), k1, box, 8, 8), std::invalid_argument);
}

TEST_CASE("demo grid cells match the motivating example regimes") {
  const auto ds = demo_nine_points();

  SUBCASE("sigma = 1/8: the cell holding (1,0) is +1, far cells are empty") {
    const KernelSpec k = make_kernel(KernelFamily::uniform_ball, 0.125, 2);
    const BBox box = default_bbox(ds, k.scale);
    const auto grid = rasterize(ds, ds.labels(), k, box, 96, 96);
    const auto [i, j] = locate(grid, 1.0, 0.0);
    CHECK(grid.at(i, j) == AugmentedDecision::make_label(ds.label_id("+1")));
    // Corner cells lie farther than sigma from every sample.
    CHECK(grid.at(0, 0) == AugmentedDecision::none());
    CHECK(grid.at(grid.width - 1, grid.height - 1) == AugmentedDecision::none());
  }

  SUBCASE("sigma = 1/2: the cell at the -1 sample is a tie") {
    const KernelSpec k = make_kernel(KernelFamily::uniform_ball, 0.5, 2);
    const BBox box = default_bbox(ds, k.scale);
    const auto grid = rasterize(ds, ds.labels(), k, box, 97, 97);
    const auto [i, j] = locate(grid, 0.0, 0.5);
    // The -1 mass and the lone +1 neighbor mass cancel exactly near the
    // sample, so the figure's gray region covers it.
    CHECK(grid.at(i, j) == AugmentedDecision::tie());
  }
}

TEST_CASE("tie cells appear only where opposite-label supports overlap") {
  const auto ds = demo_nine_points();
  for (double sigma : {0.125, 0.5, 2.0}) {
    const KernelSpec k = make_kernel(KernelFamily::uniform_ball, sigma, 2);
    const BBox box = default_bbox(ds, sigma);
    const auto grid = rasterize(ds, ds.labels(), k, box, 64, 64);
    for (int j = 0; j < grid.height; ++j) {
      for (int i = 0; i < grid.width; ++i) {
        if (grid.at(i, j).kind != DecisionKind::tie) continue;
        const std::vector<double> c{grid.center_x(i), grid.center_y(j)};
        bool plus = false, minus = false;
        for (std::size_t s = 0; s < ds.size(); ++s) {
          if (influences(k, ds.point(s), c)) {
            if (ds.alphabet()[ds.label(s)] == "+1") plus = true;
            else minus = true;
          }
        }
        CHECK(plus);
        CHECK(minus);
      }
    }
  }
}

TEST_CASE("rendering is pure: identical inputs give identical bytes") {
  const auto ds = demo_nine_points();
  const KernelSpec k = make_kernel(KernelFamily::uniform_ball, 0.5, 2);
  const BBox box = default_bbox(ds, k.scale);
  const auto a = rasterize(ds, ds.labels(), k, box, 48, 32, 1);
  const auto b = rasterize(ds, ds.labels(), k, box, 48, 32, 4);
  CHECK(ppm_bytes(a, ds.alphabet()) == ppm_bytes(b, ds.alphabet()));
}

TEST_CASE("refining the resolution keeps shared cell centers") {
  const auto ds = demo_nine_points();
  const KernelSpec k = make_kernel(KernelFamily::uniform_ball, 0.5, 2);
  const BBox box{-3.0, 3.0, -3.0, 3.0};
  const auto coarse = rasterize(ds, ds.labels(), k, box, 16, 16);
  const auto fine = rasterize(ds, ds.labels(), k, box, 48, 48);
  // Cell (i,j) of the coarse grid shares its center with (3i+1, 3j+1).
  for (int j = 0; j < 16; ++j)
    for (int i = 0; i < 16; ++i)
      CHECK(coarse.at(i, j) == fine.at(3 * i + 1, 3 * j + 1));
}

TEST_CASE("PPM layout and palette") {
  const LabeledDataset pair({0.0, 0.0, 1.0, 0.0}, 2, {0, 1}, {"-1", "+1"});
  const KernelSpec k = make_kernel(KernelFamily::uniform_ball, 0.25, 2);
  const BBox box{-1.0, 2.0, -1.0, 1.0};
  const auto grid = rasterize(pair, pair.labels(), k, box, 2, 2);
  const auto bytes = ppm_bytes(grid, pair.alphabet());
  const std::string header = "P6\n2 2\n255\n";
  REQUIRE(bytes.size() == header.size() + 12);  // 2x2 pixels, 3 bytes each
  CHECK(std::equal(header.begin(), header.end(), bytes.begin()));

  // An all-NoInfluence grid renders as off-white pixels.
  const BBox far{50.0, 60.0, 50.0, 60.0};
  const auto empty = rasterize(pair, pair.labels(), k, far, 2, 2);
  const auto off = ppm_bytes(empty, pair.alphabet());
  for (std::size_t p = header.size(); p < off.size(); p += 3) {
    CHECK(off[p] == 245);
    CHECK(off[p + 1] == 243);
    CHECK(off[p + 2] == 238);
  }
}

TEST_CASE("multiclass labels map to the categorical palette") {
  const std::vector<std::string> alphabet{"a", "b", "c"};
  const auto c0 = decision_color(AugmentedDecision::make_label(0), alphabet);
  const auto c1 = decision_color(AugmentedDecision::make_label(1), alphabet);
  const auto c2 = decision_color(AugmentedDecision::make_label(2), alphabet);
  CHECK(c0 != c1);
  CHECK(c1 != c2);
  CHECK(c0 != c2);
  // The signed labels keep their reserved colors regardless of index.
  const std::vector<std::string> signs{"+1", "-1"};
  CHECK(decision_color(AugmentedDecision::make_label(0), signs) ==
        std::array<std::uint8_t, 3>{70, 130, 220});
  CHECK(decision_color(AugmentedDecision::make_label(1), signs) ==
        std::array<std::uint8_t, 3>{220, 70, 70});
}

TEST_CASE("region CSV round-trips the decisions") {
  const auto ds = demo_nine_points();
  const KernelSpec k = make_kernel(KernelFamily::uniform_ball, 0.5, 2);
  const auto grid = rasterize(ds, ds.labels(), k, default_bbox(ds, 0.5), 24, 18);
  const auto text = region_csv_text(grid, ds.alphabet());
  const auto parsed = decisions_from_region_csv(text, ds.alphabet());
  REQUIRE(parsed.size() == grid.cells.size());
  for (std::size_t c = 0; c < parsed.size(); ++c) CHECK(parsed[c] == grid.cells[c]);
}
