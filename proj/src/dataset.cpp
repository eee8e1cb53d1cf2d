#include "noiselab/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "noiselab/rng.hpp"

namespace noiselab {

namespace {

double l2_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

double parse_double(const std::string& tok) {
  double v = 0.0;
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last)
    throw std::invalid_argument("bad numeric field: '" + tok + "'");
  return v;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

LabeledDataset::LabeledDataset(std::vector<double> points, std::size_t dim,
                               std::vector<int> labels, std::vector<std::string> alphabet)
    : points_(std::move(points)),
      dim_(dim),
      labels_(std::move(labels)),
      alphabet_(std::move(alphabet)) {
  if (dim_ < 1) throw std::invalid_argument("dataset dimension must be >= 1");
  if (labels_.empty()) throw std::invalid_argument("dataset must contain at least one sample");
  if (points_.size() != labels_.size() * dim_)
    throw std::invalid_argument("point matrix size does not match N x d");
  if (alphabet_.empty()) throw std::invalid_argument("alphabet must not be empty");
  for (std::size_t i = 0; i < alphabet_.size(); ++i)
    for (std::size_t j = i + 1; j < alphabet_.size(); ++j)
      if (alphabet_[i] == alphabet_[j])
        throw std::invalid_argument("alphabet entries must be distinct");
  for (int l : labels_)
    if (l < 0 || l >= static_cast<int>(alphabet_.size()))
      throw std::invalid_argument("label id outside alphabet");
  for (std::size_t i = 0; i < size(); ++i)
    for (std::size_t j = i + 1; j < size(); ++j)
      if (std::equal(point(i).begin(), point(i).end(), point(j).begin()))
        throw std::invalid_argument("duplicate points at rows " + std::to_string(i) +
                                    " and " + std::to_string(j));
}

int LabeledDataset::label_id(const std::string& name) const {
  for (std::size_t i = 0; i < alphabet_.size(); ++i)
    if (alphabet_[i] == name) return static_cast<int>(i);
  throw std::invalid_argument("unknown label: '" + name + "'");
}

LabeledDataset dataset_from_csv_text(const std::string& text) {
  std::istringstream in(text);
  std::string header;
  if (!std::getline(in, header) || header.empty())
    throw std::invalid_argument("empty dataset file");
  if (!header.empty() && header.back() == '\r') header.pop_back();

  // Header: d=<int>,labels=<l1>|<l2>|...
  const auto fields = split(header, ',');
  if (fields.size() != 2 || fields[0].rfind("d=", 0) != 0 ||
      fields[1].rfind("labels=", 0) != 0)
    throw std::invalid_argument("bad dataset header: '" + header + "'");
  const int d = static_cast<int>(parse_double(fields[0].substr(2)));
  if (d < 1) throw std::invalid_argument("header dimension must be >= 1");
  std::vector<std::string> alphabet = split(fields[1].substr(7), '|');

  std::vector<double> points;
  std::vector<int> labels;
  std::string line;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto toks = split(line, ',');
    if (static_cast<int>(toks.size()) != d + 1)
      throw std::invalid_argument("ragged row at line " + std::to_string(lineno));
    for (int i = 0; i < d; ++i) points.push_back(parse_double(toks[i]));
    int id = -1;
    for (std::size_t a = 0; a < alphabet.size(); ++a)
      if (alphabet[a] == toks[d]) id = static_cast<int>(a);
    if (id < 0)
      throw std::invalid_argument("unknown label '" + toks[d] + "' at line " +
                                  std::to_string(lineno));
    labels.push_back(id);
  }
  return LabeledDataset(std::move(points), static_cast<std::size_t>(d), std::move(labels),
                        std::move(alphabet));
}

LabeledDataset dataset_from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("bad dataset JSON: ") + e.what());
  }
  if (!j.contains("d") || !j.contains("labels") || !j.contains("rows"))
    throw std::invalid_argument("dataset JSON needs d, labels, rows");
  const int d = j["d"].get<int>();
  std::vector<std::string> alphabet = j["labels"].get<std::vector<std::string>>();
  std::vector<double> points;
  std::vector<int> labels;
  for (const auto& row : j["rows"]) {
    if (!row.is_array() || static_cast<int>(row.size()) != d + 1)
      throw std::invalid_argument("ragged JSON row");
    for (int i = 0; i < d; ++i) points.push_back(row[i].get<double>());
    const std::string name = row[d].get<std::string>();
    int id = -1;
    for (std::size_t a = 0; a < alphabet.size(); ++a)
      if (alphabet[a] == name) id = static_cast<int>(a);
    if (id < 0) throw std::invalid_argument("unknown label '" + name + "'");
    labels.push_back(id);
  }
  return LabeledDataset(std::move(points), static_cast<std::size_t>(d), std::move(labels),
                        std::move(alphabet));
}

std::string dataset_to_csv_text(const LabeledDataset& ds) {
  std::string out = "d=" + std::to_string(ds.dim()) + ",labels=";
  for (std::size_t a = 0; a < ds.alphabet().size(); ++a) {
    if (a) out += '|';
    out += ds.alphabet()[a];
  }
  out += '\n';
  for (std::size_t i = 0; i < ds.size(); ++i) {
    for (double v : ds.point(i)) {
      out += format_double(v);
      out += ',';
    }
    out += ds.alphabet()[ds.label(i)];
    out += '\n';
  }
  return out;
}

std::string dataset_to_json_text(const LabeledDataset& ds) {
  nlohmann::json j;
  j["d"] = ds.dim();
  j["labels"] = ds.alphabet();
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < ds.size(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (double v : ds.point(i)) row.push_back(v);
    row.push_back(ds.alphabet()[ds.label(i)]);
    rows.push_back(std::move(row));
  }
  j["rows"] = std::move(rows);
  return j.dump();
}

LabeledDataset load_dataset(const std::filesystem::path& path, DatasetFormat format) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open dataset file: " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  if (text.empty()) throw std::invalid_argument("empty dataset file: " + path.string());
  return format == DatasetFormat::csv ? dataset_from_csv_text(text)
                                      : dataset_from_json_text(text);
}

void save_dataset(const LabeledDataset& ds, const std::filesystem::path& path,
                  DatasetFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write dataset file: " + path.string());
  out << (format == DatasetFormat::csv ? dataset_to_csv_text(ds) : dataset_to_json_text(ds));
}

LabeledDataset demo_nine_points() {
  const std::vector<double> pts = {
      0.0,   0.5,  -1.0,  0.5,   0.25, 0.5,  0.5, 2.5, -1.3, -1.7,
      0.5,   -1.0, 0.05,  2.5,   -2.0, -1.7, 1.0, 0.0,
  };
  std::vector<int> labels = {0, 1, 1, 1, 1, 1, 1, 1, 1};
  return LabeledDataset(pts, 2, std::move(labels), {"-1", "+1"});
}

LabeledDataset synth_clusters(int n_clusters, int points_per_cluster, int dim,
                              double spread, double separation, std::uint64_t seed) {
  if (n_clusters < 1 || points_per_cluster < 1 || dim < 1)
    throw std::invalid_argument("cluster counts and dim must be >= 1");
  if (!(spread > 0.0) || !(separation > 0.0))
    throw std::invalid_argument("spread and separation must be positive");

  // Cluster centers on an integer lattice scaled by `separation`, so any two
  // centers are at least `separation` apart.
  const int side = static_cast<int>(std::ceil(std::pow(static_cast<double>(n_clusters),
                                                       1.0 / static_cast<double>(dim))));
  std::vector<std::vector<double>> centers;
  std::vector<int> idx(dim, 0);
  while (static_cast<int>(centers.size()) < n_clusters) {
    std::vector<double> c(dim);
    for (int a = 0; a < dim; ++a) c[a] = separation * static_cast<double>(idx[a]);
    centers.push_back(std::move(c));
    for (int a = 0; a < dim; ++a) {
      if (++idx[a] < side) break;
      idx[a] = 0;
    }
  }

  std::vector<double> points;
  std::vector<int> labels;
  std::vector<std::string> alphabet;
  for (int c = 0; c < n_clusters; ++c) alphabet.push_back(std::to_string(c));

  for (int c = 0; c < n_clusters; ++c) {
    for (int p = 0; p < points_per_cluster; ++p) {
      rng::Stream stream = rng::derive(seed, static_cast<std::uint64_t>(c),
                                       static_cast<std::uint64_t>(p));
      // Redraw on the (measure-zero) chance of a duplicate row.
      for (int attempt = 0; attempt < 64; ++attempt) {
        std::vector<double> x(dim);
        for (int a = 0; a < dim; ++a) x[a] = centers[c][a] + spread * stream.normal();
        bool dup = false;
        for (std::size_t r = 0; r + dim <= points.size() && !dup; r += dim)
          dup = std::equal(x.begin(), x.end(), points.begin() + r);
        if (!dup) {
          points.insert(points.end(), x.begin(), x.end());
          break;
        }
        if (attempt == 63) throw std::runtime_error("could not draw distinct points");
      }
      labels.push_back(c);
    }
  }
  return LabeledDataset(std::move(points), static_cast<std::size_t>(dim), std::move(labels),
                        std::move(alphabet));
}

LabeledDataset randomize_labels(const LabeledDataset& ds, std::uint64_t seed) {
  if (ds.alphabet().size() < 2)
    throw std::invalid_argument("randomize_labels needs an alphabet of size >= 2");
  rng::Stream stream = rng::derive(seed, 0x72656c61);
  std::vector<int> labels(ds.size());
  for (std::size_t i = 0; i < ds.size(); ++i)
    labels[i] = static_cast<int>(stream.below(ds.alphabet().size()));
  return LabeledDataset(ds.raw_points(), ds.dim(), std::move(labels), ds.alphabet());
}

double min_pairwise_distance(const LabeledDataset& ds) {
  if (ds.size() < 2) throw std::invalid_argument("need N >= 2 for pairwise distances");
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < ds.size(); ++i)
    for (std::size_t j = i + 1; j < ds.size(); ++j)
      best = std::min(best, l2_distance(ds.point(i), ds.point(j)));
  return best;
}

std::vector<double> second_neighbor_distances(const LabeledDataset& ds) {
  if (ds.size() < 3) throw std::invalid_argument("need N >= 3 for second neighbors");
  std::vector<double> out(ds.size());
  for (std::size_t i = 0; i < ds.size(); ++i) {
    double first = std::numeric_limits<double>::infinity();
    double second = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < ds.size(); ++j) {
      if (j == i) continue;
      const double d = l2_distance(ds.point(i), ds.point(j));
      if (d < first) {
        second = first;
        first = d;
      } else if (d < second) {
        second = d;
      }
    }
    out[i] = second;
  }
  return out;
}

}  // namespace noiselab
