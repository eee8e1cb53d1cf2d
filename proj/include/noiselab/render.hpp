#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "noiselab/augment.hpp"
#include "noiselab/dataset.hpp"
#include "noiselab/kernels.hpp"

namespace noiselab {

struct BBox {
  double x_min = 0.0, x_max = 1.0;
  double y_min = 0.0, y_max = 1.0;
};

// Augmented decisions sampled at cell centers over a 2-D bounding box.
// cells is row-major with row 0 at y_min.
struct RegionGrid {
  BBox bbox;
  int width = 0, height = 0;
  std::vector<AugmentedDecision> cells;

  const AugmentedDecision& at(int i, int j) const { return cells[static_cast<std::size_t>(j) * width + i]; }
  double center_x(int i) const;
  double center_y(int j) const;
};

// Dataset bounding box expanded by 2 sigma per side.
BBox default_bbox(const LabeledDataset& ds, double sigma);

RegionGrid rasterize(const LabeledDataset& ds, const Labeling& h, const KernelSpec& k,
                     const BBox& bbox, int width, int height, int workers = 1);

// Fixed palette: label "+1" blue, "-1" red, ties gray, no influence off-white,
// other labels a categorical palette by alphabet index.
std::array<std::uint8_t, 3> decision_color(const AugmentedDecision& d,
                                           const std::vector<std::string>& alphabet);

// Binary PPM (P6), top row first.
void write_ppm(const RegionGrid& grid, const std::vector<std::string>& alphabet,
               const std::filesystem::path& path);
std::vector<std::uint8_t> ppm_bytes(const RegionGrid& grid,
                                    const std::vector<std::string>& alphabet);

// CSV rows (i, j, cx, cy, decision).
void write_region_csv(const RegionGrid& grid, const std::vector<std::string>& alphabet,
                      const std::filesystem::path& path);
std::string region_csv_text(const RegionGrid& grid, const std::vector<std::string>& alphabet);

// Reparses the decision column of region_csv_text output.
std::vector<AugmentedDecision> decisions_from_region_csv(
    const std::string& text, const std::vector<std::string>& alphabet);

}  // namespace noiselab
