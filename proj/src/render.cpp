#include "noiselab/render.hpp"

#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "noiselab/parallel.hpp"

namespace noiselab {

double RegionGrid::center_x(int i) const {
  const double step = (bbox.x_max - bbox.x_min) / width;
  return bbox.x_min + (static_cast<double>(i) + 0.5) * step;
}

double RegionGrid::center_y(int j) const {
  const double step = (bbox.y_max - bbox.y_min) / height;
  return bbox.y_min + (static_cast<double>(j) + 0.5) * step;
}

BBox default_bbox(const LabeledDataset& ds, double sigma) {
  if (ds.dim() != 2) throw std::invalid_argument("default_bbox requires a 2-D dataset");
  BBox box{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
           std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const auto p = ds.point(i);
    box.x_min = std::min(box.x_min, p[0]);
    box.x_max = std::max(box.x_max, p[0]);
    box.y_min = std::min(box.y_min, p[1]);
    box.y_max = std::max(box.y_max, p[1]);
  }
  box.x_min -= 2.0 * sigma;
  box.x_max += 2.0 * sigma;
  box.y_min -= 2.0 * sigma;
  box.y_max += 2.0 * sigma;
  return box;
}

RegionGrid rasterize(const LabeledDataset& ds, const Labeling& h, const KernelSpec& k,
                     const BBox& bbox, int width, int height, int workers) {
  if (ds.dim() != 2) throw std::invalid_argument("rasterize requires a 2-D dataset");
  if (width < 2 || height < 2) throw std::invalid_argument("grid resolution must be >= 2x2");
  if (!(bbox.x_max > bbox.x_min && bbox.y_max > bbox.y_min))
    throw std::invalid_argument("bounding box must be nonempty");
  check_labeling(ds, h);

  RegionGrid grid;
  grid.bbox = bbox;
  grid.width = width;
  grid.height = height;
  grid.cells.resize(static_cast<std::size_t>(width) * height);

  parallel_for(static_cast<std::size_t>(height), workers, [&](std::size_t j) {
    std::vector<double> x(2);
    x[1] = grid.center_y(static_cast<int>(j));
    for (int i = 0; i < width; ++i) {
      x[0] = grid.center_x(i);
      grid.cells[j * width + i] = augmented_classify(ds, h, k, x);
    }
  });
  return grid;
}

namespace {

constexpr std::array<std::array<std::uint8_t, 3>, 8> kCategorical = {{
    {70, 130, 220},   // also the "+1" color
    {220, 70, 70},    // also the "-1" color
    {60, 170, 110},
    {230, 160, 40},
    {150, 90, 200},
    {90, 190, 200},
    {200, 110, 170},
    {120, 120, 60},
}};

}  // namespace

std::array<std::uint8_t, 3> decision_color(const AugmentedDecision& d,
                                           const std::vector<std::string>& alphabet) {
  switch (d.kind) {
    case DecisionKind::tie: return {128, 128, 128};
    case DecisionKind::no_influence: return {245, 243, 238};
    case DecisionKind::label: {
      const std::string& name = alphabet.at(d.label);
      if (name == "+1") return {70, 130, 220};
      if (name == "-1") return {220, 70, 70};
      return kCategorical[static_cast<std::size_t>(d.label) % kCategorical.size()];
    }
  }
  throw std::logic_error("unreachable decision kind");
}

std::vector<std::uint8_t> ppm_bytes(const RegionGrid& grid,
                                    const std::vector<std::string>& alphabet) {
  std::string header = "P6\n" + std::to_string(grid.width) + " " +
                       std::to_string(grid.height) + "\n255\n";
  std::vector<std::uint8_t> bytes(header.begin(), header.end());
  bytes.reserve(bytes.size() + static_cast<std::size_t>(grid.width) * grid.height * 3);
  for (int j = grid.height - 1; j >= 0; --j) {  // top row first
    for (int i = 0; i < grid.width; ++i) {
      const auto rgb = decision_color(grid.at(i, j), alphabet);
      bytes.push_back(rgb[0]);
      bytes.push_back(rgb[1]);
      bytes.push_back(rgb[2]);
    }
  }
  return bytes;
}

void write_ppm(const RegionGrid& grid, const std::vector<std::string>& alphabet,
               const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write image file: " + path.string());
  const auto bytes = ppm_bytes(grid, alphabet);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("short write to image file: " + path.string());
}

std::string region_csv_text(const RegionGrid& grid,
                            const std::vector<std::string>& alphabet) {
  std::string out = "i,j,cx,cy,decision\n";
  for (int j = 0; j < grid.height; ++j) {
    for (int i = 0; i < grid.width; ++i) {
      out += std::to_string(i);
      out += ',';
      out += std::to_string(j);
      out += ',';
      out += format_double(grid.center_x(i));
      out += ',';
      out += format_double(grid.center_y(j));
      out += ',';
      out += to_string(grid.at(i, j), alphabet);
      out += '\n';
    }
  }
  return out;
}

void write_region_csv(const RegionGrid& grid, const std::vector<std::string>& alphabet,
                      const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write CSV file: " + path.string());
  out << region_csv_text(grid, alphabet);
}

std::vector<AugmentedDecision> decisions_from_region_csv(
    const std::string& text, const std::vector<std::string>& alphabet) {
  std::istringstream in(text);
  std::string line;
  std::vector<AugmentedDecision> out;
  bool header = true;
  while (std::getline(in, line)) {
    if (header) {
      header = false;
      continue;
    }
    if (line.empty()) continue;
    const auto pos = line.rfind(',');
    if (pos == std::string::npos) throw std::invalid_argument("bad region CSV row");
    out.push_back(decision_from_string(line.substr(pos + 1), alphabet));
  }
  return out;
}

}  // namespace noiselab
